// SPDX-License-Identifier: Apache-2.0

#include "dxl/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "dxl/rng.hpp"

namespace dxl {

SignalSampler::SignalSampler(const ChannelState& channel, const TransmitProfile& profile,
                             int samples, std::uint64_t seed)
    : channel_(channel), profile_(profile), samples_(samples), rng_(seed) {
  channel_.validate();
  if (samples_ < 1) {
    throw std::invalid_argument("SignalSampler: need at least one sample");
  }
  factors_.reserve(channel_.users());
  for (int k = 0; k < channel_.users(); ++k) {
    // Q_k = A_k A_k^H with A_k = U sqrt(P_k lambda) from the spectral
    // factorization of X_k; tiny negative roundoff eigenvalues clamp to zero.
    const HermitianEig eig = herm_eig(profile_.users[k].matrix());
    Eigen::VectorXd scaled = (channel_.powers[k] * eig.values.array()).max(0.0).sqrt();
    factors_.push_back(eig.vectors * scaled.asDiagonal());
  }
}

std::vector<Eigen::VectorXcd> SignalSampler::draw() {
  std::vector<Eigen::VectorXcd> batch;
  batch.reserve(samples_);
  const int n = channel_.rx_antennas;
  for (int s = 0; s < samples_; ++s) {
    Eigen::VectorXcd y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = complex_gaussian(rng_, normal_);  // z ~ CN(0, I)
    }
    for (int k = 0; k < channel_.users(); ++k) {
      const int m = channel_.tx_antennas(k);
      Eigen::VectorXcd xi(m);
      for (int j = 0; j < m; ++j) {
        xi[j] = complex_gaussian(rng_, normal_);
      }
      y.noalias() += channel_.channels[k] * (factors_[k] * xi);
    }
    batch.push_back(std::move(y));
  }
  return batch;
}

HermitianMatrix SignalSampler::true_covariance() const {
  MatrixXc w = MatrixXc::Identity(channel_.rx_antennas, channel_.rx_antennas);
  for (int k = 0; k < channel_.users(); ++k) {
    w.noalias() += channel_.powers[k] * channel_.channels[k] *
                   profile_.users[k].matrix().mat() * channel_.channels[k].adjoint();
  }
  return HermitianMatrix(w);
}

HermitianMatrix sample_covariance(const std::vector<Eigen::VectorXcd>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("sample_covariance: empty sample list");
  }
  const Eigen::Index n = samples.front().size();
  MatrixXc acc = MatrixXc::Zero(n, n);
  for (const Eigen::VectorXcd& y : samples) {
    if (y.size() != n) {
      throw std::invalid_argument("sample_covariance: inconsistent sample dimensions");
    }
    acc.noalias() += y * y.adjoint();
  }
  return HermitianMatrix(acc / static_cast<double>(samples.size()));
}

HermitianMatrix unbiased_precision(const HermitianMatrix& sample_cov, int samples, int dim) {
  if (dim != sample_cov.dim()) {
    throw std::invalid_argument("unbiased_precision: dimension mismatch");
  }
  if (samples <= dim + 1) {
    throw std::invalid_argument("unbiased_precision: need more than dim + 1 samples, got " +
                                std::to_string(samples));
  }
  Eigen::FullPivLU<MatrixXc> lu(sample_cov.mat());
  if (!lu.isInvertible()) {
    throw eigensolver_error("unbiased_precision: singular sample covariance");
  }
  // Complex-Wishart correction: E[What^{-1}] = S/(S - N) W^{-1} for
  // circularly-symmetric Gaussian samples, so (S - N)/S removes the bias.
  const double factor =
      static_cast<double>(samples - dim) / static_cast<double>(samples);
  return HermitianMatrix(factor * lu.inverse());
}

ChannelMeasurementModel::ChannelMeasurementModel(MatrixXc true_channel, double eta,
                                                 std::uint64_t seed)
    : channel_(std::move(true_channel)), rng_(seed) {
  if (eta < 0.0) {
    throw std::invalid_argument("ChannelMeasurementModel: eta must be >= 0");
  }
  const double entries = static_cast<double>(channel_.rows() * channel_.cols());
  scale_ = eta * channel_.norm() / std::sqrt(entries);
}

MatrixXc ChannelMeasurementModel::measure() {
  MatrixXc noisy = channel_;
  for (Eigen::Index i = 0; i < noisy.rows(); ++i) {
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
      noisy(i, j) += scale_ * complex_gaussian(rng_, normal_);
    }
  }
  return noisy;
}

std::vector<MatrixXc> ChannelMeasurementModel::measure_batch(int count) {
  std::vector<MatrixXc> batch;
  batch.reserve(count);
  for (int s = 0; s < count; ++s) {
    batch.push_back(measure());
  }
  return batch;
}

namespace {

void check_measurements(const std::vector<MatrixXc>& measurements,
                        const HermitianMatrix& precision) {
  if (measurements.size() < 2) {
    throw std::invalid_argument("gradient estimator: need at least two channel measurements");
  }
  for (const MatrixXc& h : measurements) {
    if (h.rows() != precision.dim() || h.cols() != measurements.front().cols()) {
      throw std::invalid_argument("gradient estimator: measurement dimensions inconsistent");
    }
  }
}

}  // namespace

HermitianMatrix unbiased_gradient_pairwise(const std::vector<MatrixXc>& measurements,
                                           const HermitianMatrix& precision) {
  check_measurements(measurements, precision);
  const int s = static_cast<int>(measurements.size());
  const Eigen::Index m = measurements.front().cols();
  MatrixXc acc = MatrixXc::Zero(m, m);
  for (int j = 0; j + 1 < s; ++j) {
    const MatrixXc cross = measurements[j].adjoint() * precision.mat() * measurements[j + 1];
    acc += cross + cross.adjoint();
  }
  return HermitianMatrix(acc / (2.0 * (s - 1)));
}

HermitianMatrix unbiased_gradient_alldistinct(const std::vector<MatrixXc>& measurements,
                                              const HermitianMatrix& precision) {
  check_measurements(measurements, precision);
  const int s = static_cast<int>(measurements.size());
  const Eigen::Index m = measurements.front().cols();
  // sum_{s != s'} H_s^H P H_{s'} = T^H P T - sum_s H_s^H P H_s with T = sum_s H_s.
  MatrixXc total = MatrixXc::Zero(precision.dim(), m);
  MatrixXc diag = MatrixXc::Zero(m, m);
  for (const MatrixXc& h : measurements) {
    total += h;
    diag.noalias() += h.adjoint() * precision.mat() * h;
  }
  MatrixXc acc = total.adjoint() * precision.mat() * total - diag;
  return HermitianMatrix(acc / (static_cast<double>(s) * (s - 1)));
}

namespace {

// E[||E0||_F] for the Hermitian-symmetrized standard Gaussian ensemble:
// ||E0||_F^2 ~ chi^2_{d^2} / 2, so the mean norm is Gamma((d^2+1)/2)/Gamma(d^2/2).
double mean_frobenius_norm(int dim) {
  const double m = static_cast<double>(dim) * dim;
  return std::exp(std::lgamma((m + 1.0) / 2.0) - std::lgamma(m / 2.0));
}

}  // namespace

HermitianMatrix additive_noise_oracle(const HermitianMatrix& v, double eta,
                                      std::mt19937_64& rng) {
  if (eta < 0.0) {
    throw std::invalid_argument("additive_noise_oracle: eta must be >= 0");
  }
  if (eta == 0.0) {
    return v;
  }
  const int d = v.dim();
  std::normal_distribution<double> normal;
  MatrixXc g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      g(i, j) = complex_gaussian(rng, normal);
    }
  }
  const HermitianMatrix noise{g};  // symmetrized
  const double scale = eta * v.frobenius_norm() / mean_frobenius_norm(d);
  return v + noise * scale;
}

GradientOracle noisy_linear_oracle(const HermitianMatrix& c, double eta) {
  const HermitianEig eig = herm_eig(c);
  // Gaussian tails are unbounded; the declared bound covers draws up to ~10
  // noise standard deviations, which the almost-sure-bounded model idealizes.
  const double bound = eig.values.cwiseAbs().maxCoeff() + 10.0 * eta * c.frobenius_norm();
  return GradientOracle(
      c.dim(), bound,
      [c, eta](const SpectraPoint&, std::int64_t, std::mt19937_64& rng) {
        return additive_noise_oracle(c, eta, rng);
      },
      /*ignores_point=*/true);
}

}  // namespace dxl

// SPDX-License-Identifier: Apache-2.0
//
// Unbiased feedback estimation: received-signal sampling, the corrected
// precision-matrix estimator, Hermitian unbiased gradient estimators built
// from noisy channel measurements, and the additive relative-noise oracle.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dxl/mimo.hpp"
#include "dxl/solver.hpp"

namespace dxl {

/// Draws received-signal vectors y = sum_k H_k x_k + z with x_k ~ CN(0, P_k X_k)
/// and z ~ CN(0, I). Owns its generator; one run uses one sampler.
class SignalSampler {
 public:
  SignalSampler(const ChannelState& channel, const TransmitProfile& profile, int samples,
                std::uint64_t seed);

  /// One batch of S independent received-signal samples.
  std::vector<Eigen::VectorXcd> draw();

  int samples() const { return samples_; }
  int signal_dim() const { return channel_.rx_antennas; }

  /// The exact covariance E[y y^H] = I + sum_k H_k Q_k H_k^H of the sampler.
  HermitianMatrix true_covariance() const;

 private:
  ChannelState channel_;
  TransmitProfile profile_;
  int samples_;
  std::vector<MatrixXc> factors_;  // A_k with A_k A_k^H = P_k X_k
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

/// Classical covariance estimate (1/S) sum_s y_s y_s^H (no small-sample
/// correction; the signal mean is known to be zero).
HermitianMatrix sample_covariance(const std::vector<Eigen::VectorXcd>& samples);

/// Unbiased precision estimate ((S - N)/S) Whate^{-1} for circularly-symmetric
/// complex Gaussian samples; requires S > N + 1 measurements.
HermitianMatrix unbiased_precision(const HermitianMatrix& sample_cov, int samples, int dim);

/// Imperfect channel measurements Hhat = H + eta ||H||_F / sqrt(N M) * E with
/// i.i.d. standard complex Gaussian E; zero-mean, so E[Hhat] = H.
class ChannelMeasurementModel {
 public:
  ChannelMeasurementModel(MatrixXc true_channel, double eta, std::uint64_t seed);

  MatrixXc measure();
  std::vector<MatrixXc> measure_batch(int count);

  const MatrixXc& true_channel() const { return channel_; }

 private:
  MatrixXc channel_;
  double scale_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

/// Hermitian unbiased gradient estimate from consecutive measurement pairs:
/// (1/(2(S-1))) sum_j (Hhat_j^H P Hhat_{j+1} + Hhat_{j+1}^H P Hhat_j).
HermitianMatrix unbiased_gradient_pairwise(const std::vector<MatrixXc>& measurements,
                                           const HermitianMatrix& precision);

/// All-distinct-pairs variant (1/(S(S-1))) sum_{s != s'} Hhat_s^H P Hhat_{s'};
/// same unbiasedness contract, lower variance at equal S. Coincides with the
/// pairwise form at S = 2.
HermitianMatrix unbiased_gradient_alldistinct(const std::vector<MatrixXc>& measurements,
                                              const HermitianMatrix& precision);

/// V + eta ||V||_F E with E a Hermitian-symmetrized standard Gaussian matrix
/// scaled to unit expected Frobenius norm; zero-mean perturbation of V.
HermitianMatrix additive_noise_oracle(const HermitianMatrix& v, double eta, std::mt19937_64& rng);

/// Gradient oracle for F(X) = tr(CX) observed through additive relative noise.
GradientOracle noisy_linear_oracle(const HermitianMatrix& c, double eta);

}  // namespace dxl

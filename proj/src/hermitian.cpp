// SPDX-License-Identifier: Apache-2.0

#include "dxl/hermitian.hpp"

#include <cmath>
#include <random>

#include "dxl/rng.hpp"

namespace dxl {

HermitianMatrix::HermitianMatrix(const MatrixXc& raw) {
  if (raw.rows() != raw.cols() || raw.rows() < 1) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty, got " +
                                std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()));
  }
  mat_ = 0.5 * (raw + raw.adjoint());
}

HermitianMatrix HermitianMatrix::Zero(int dim) {
  return trusted_hermitian(MatrixXc::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::Identity(int dim) {
  return trusted_hermitian(MatrixXc::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::Diagonal(const Eigen::VectorXd& values) {
  MatrixXc m = MatrixXc::Zero(values.size(), values.size());
  m.diagonal() = values.cast<Complex>();
  return trusted_hermitian(std::move(m));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return trusted_hermitian(mat_ + o.mat_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return trusted_hermitian(mat_ - o.mat_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return trusted_hermitian(s * mat_);
}

HermitianMatrix HermitianMatrix::traceless() const {
  const double shift = trace() / dim();
  return trusted_hermitian(mat_ - shift * MatrixXc::Identity(dim(), dim()));
}

HermitianMatrix trusted_hermitian(MatrixXc m) {
  return HermitianMatrix(HermitianMatrix::trusted_t{}, std::move(m));
}

HermitianEig herm_eig(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(a.mat());
  if (solver.info() != Eigen::Success) {
    throw eigensolver_error("Hermitian eigensolver failed: dim=" + std::to_string(a.dim()) +
                            " max|entry|=" + std::to_string(a.mat().cwiseAbs().maxCoeff()));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianMatrix spectral_assemble(const HermitianEig& eig, const Eigen::VectorXd& values) {
  MatrixXc m = eig.vectors * values.asDiagonal() * eig.vectors.adjoint();
  // symmetrize away the reassembly roundoff
  return HermitianMatrix(m);
}

SpectraPoint::SpectraPoint(const HermitianMatrix& m) : mat_(m) {
  const double tr = mat_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::domain_error("SpectraPoint: trace must be 1, got " + std::to_string(tr));
  }
  const HermitianEig eig = herm_eig(mat_);
  const double min_eig = eig.values.minCoeff();
  if (min_eig < -kPsdTol) {
    throw std::domain_error("SpectraPoint: matrix not PSD, min eigenvalue " +
                            std::to_string(min_eig));
  }
}

SpectraPoint SpectraPoint::Uniform(int dim) {
  return trusted_spectra_point(HermitianMatrix::Identity(dim) * (1.0 / dim));
}

SpectraPoint trusted_spectra_point(HermitianMatrix m) {
  return SpectraPoint(SpectraPoint::trusted_t{}, std::move(m));
}

HermitianMatrix herm_exp(const HermitianMatrix& a) {
  const HermitianEig eig = herm_eig(a);
  return spectral_assemble(eig, eig.values.array().exp());
}

HermitianMatrix herm_log(const HermitianMatrix& x, bool clamp_eigenvalues) {
  const HermitianEig eig = herm_eig(x);
  Eigen::VectorXd lambda = eig.values;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < kEigFloor) {
      if (!clamp_eigenvalues) {
        throw std::domain_error("herm_log: eigenvalue " + std::to_string(lambda[i]) +
                                " outside the domain of the matrix logarithm");
      }
      lambda[i] = kEigFloor;
    }
  }
  return spectral_assemble(eig, lambda.array().log());
}

SpectraPoint exp_project(const HermitianMatrix& y) {
  const HermitianEig eig = herm_eig(y);
  const double shift = eig.values.maxCoeff();
  Eigen::VectorXd w = (eig.values.array() - shift).exp();
  w /= w.sum();
  return trusted_spectra_point(spectral_assemble(eig, w));
}

double vn_entropy(const SpectraPoint& x) {
  const HermitianEig eig = herm_eig(x.matrix());
  double h = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = std::max(eig.values[i], kEigFloor);
    h += lambda * std::log(lambda);
  }
  return h;
}

double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_inner: dimension mismatch " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  }
  return (a.mat().array() * b.mat().array().conjugate()).sum().real();
}

HermitianMatrix random_hermitian(int dim, double bound, std::uint64_t seed) {
  if (dim < 1 || bound <= 0.0) {
    throw std::invalid_argument("random_hermitian: need dim >= 1 and bound > 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXc g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = complex_gaussian(rng, normal);
    }
  }
  HermitianMatrix h{g};  // symmetrizes
  const HermitianEig eig = herm_eig(h);
  const double spectral = eig.values.cwiseAbs().maxCoeff();
  if (spectral > bound) {
    h = h * (bound / spectral);
  }
  return h;
}

}  // namespace dxl

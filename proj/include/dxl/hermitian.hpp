// SPDX-License-Identifier: Apache-2.0
//
// Dense complex Hermitian matrices, the spectrahedron of unit-trace PSD
// matrices, and the spectral matrix functions (exp, log, entropy) used by the
// exponential-learning solver.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dxl {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;

/// PSD tolerance on spectrahedron membership checks.
inline constexpr double kPsdTol = 1e-10;
/// Unit-trace tolerance on spectrahedron membership checks.
inline constexpr double kTraceTol = 1e-12;
/// Eigenvalue floor used by the matrix logarithm and the entropy so that
/// rank-deficient points evaluate with the 0*log(0) = 0 convention.
inline constexpr double kEigFloor = 1e-300;

struct eigensolver_error : std::runtime_error {
  explicit eigensolver_error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense complex square matrix constrained to equal its conjugate transpose.
/// Construction symmetrizes (A + A^H)/2, so near-Hermitian numerical input is
/// accepted rather than rejected.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const MatrixXc& raw);

  static HermitianMatrix Zero(int dim);
  static HermitianMatrix Identity(int dim);
  static HermitianMatrix Diagonal(const Eigen::VectorXd& values);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const MatrixXc& mat() const { return mat_; }

  double trace() const { return mat_.trace().real(); }
  double frobenius_norm() const { return mat_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix operator-() const { return *this * -1.0; }

  /// Component with zero trace: A - (tr A / dim) I.
  HermitianMatrix traceless() const;

 private:
  struct trusted_t {};
  HermitianMatrix(trusted_t, MatrixXc m) : mat_(std::move(m)) {}
  friend HermitianMatrix trusted_hermitian(MatrixXc m);

  MatrixXc mat_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& a) { return a * s; }

/// Internal fast path for matrices Hermitian by construction (sums, real
/// scalings, spectral reassemblies followed by explicit symmetrization).
HermitianMatrix trusted_hermitian(MatrixXc m);

/// Eigendecomposition A = U diag(values) U^H with real eigenvalues.
struct HermitianEig {
  Eigen::VectorXd values;  // ascending
  MatrixXc vectors;
};

HermitianEig herm_eig(const HermitianMatrix& a);

/// Rebuild U f(lambda) U^H from a spectral factorization.
HermitianMatrix spectral_assemble(const HermitianEig& eig, const Eigen::VectorXd& values);

/// Positive-semidefinite Hermitian matrix with unit trace; the decision
/// variable of the spectrahedron-constrained problems.
class SpectraPoint {
 public:
  explicit SpectraPoint(const HermitianMatrix& m);

  static SpectraPoint Uniform(int dim);  // I / dim

  int dim() const { return mat_.dim(); }
  const HermitianMatrix& matrix() const { return mat_; }

 private:
  struct trusted_t {};
  SpectraPoint(trusted_t, HermitianMatrix m) : mat_(std::move(m)) {}
  friend SpectraPoint trusted_spectra_point(HermitianMatrix m);

  HermitianMatrix mat_;
};

/// Internal fast path for points PSD and unit-trace by construction.
SpectraPoint trusted_spectra_point(HermitianMatrix m);

/// Matrix exponential via full Hermitian eigendecomposition.
HermitianMatrix herm_exp(const HermitianMatrix& a);

/// Matrix logarithm. With clamp_eigenvalues (default) eigenvalues are floored
/// at kEigFloor; otherwise an eigenvalue <= 0 is a domain error.
HermitianMatrix herm_log(const HermitianMatrix& x, bool clamp_eigenvalues = true);

/// exp(Y) / tr[exp(Y)]; shift-invariant and overflow-safe (the largest
/// eigenvalue is subtracted before exponentiating).
SpectraPoint exp_project(const HermitianMatrix& y);

/// tr[X log X] with the 0*log(0) = 0 convention; in [-log dim, 0].
double vn_entropy(const SpectraPoint& x);

/// Re tr(A B); the Frobenius pairing (exactly real for Hermitian pairs).
double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// Deterministic random Hermitian test matrix: (G + G^H)/2 from seeded complex
/// Gaussian entries, rescaled so the spectral norm is at most `bound`.
HermitianMatrix random_hermitian(int dim, double bound, std::uint64_t seed);

}  // namespace dxl

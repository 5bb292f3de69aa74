// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the test suites: independent oracles (matrix powers,
// quadrature, grid search) kept deliberately separate from the library's own
// computation paths.

#pragma once

#include <cmath>
#include <random>

#include "dxl/hermitian.hpp"
#include "dxl/rng.hpp"

namespace dxl::test {

inline double frob_dist(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.mat() - b.mat()).norm();
}

inline double frob_dist(const SpectraPoint& a, const SpectraPoint& b) {
  return frob_dist(a.matrix(), b.matrix());
}

/// X^s for PSD X via an eigendecomposition independent of the code under test
/// only in usage: the transform itself is the oracle definition.
inline MatrixXc herm_pow(const HermitianMatrix& x, double s) {
  const HermitianEig eig = herm_eig(x);
  Eigen::VectorXd powered(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    powered[i] = std::pow(std::max(eig.values[i], 0.0), s);
  }
  return eig.vectors * powered.asDiagonal() * eig.vectors.adjoint();
}

/// Random strictly-positive spectrahedron point.
inline SpectraPoint random_point(int dim, std::uint64_t seed, double spread = 2.0) {
  return exp_project(random_hermitian(dim, spread, seed));
}

inline HermitianMatrix diag2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return HermitianMatrix::Diagonal(v);
}

}  // namespace dxl::test

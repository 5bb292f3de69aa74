// SPDX-License-Identifier: Apache-2.0
//
// Reference extrema of the sum rate over the product of spectrahedra:
// the maximum via monotone projected-gradient ascent (the problem is concave),
// the minimum via rank-one vertex search (a concave function is minimized at
// extreme points, which are rank-one here).

#pragma once

#include <cstdint>
#include <optional>

#include "dxl/mimo.hpp"

namespace dxl {

struct ExtremaOptions {
  int starts = 5;               // seeded PGA starts for the maximum
  int restarts = 1000;          // random rank-one profiles for the minimum
  int polish_candidates = 16;   // best restarts refined by coordinate sweeps
  std::int64_t max_iters = 20000;
  int max_sweeps = 64;
  std::uint64_t seed = 0;
  bool parallel = true;
  /// Warm starts for slowly varying channels; replaces one PGA start and one
  /// vertex candidate.
  std::optional<TransmitProfile> warm_max;
  std::optional<std::vector<Eigen::VectorXcd>> warm_min;
};

struct Extrema {
  double sum_rate_max = 0.0;
  double sum_rate_min = 0.0;
  bool max_converged = false;   // first-order (Frank-Wolfe) gap below tol
  bool min_converged = false;   // vertex sweeps reached a fixed point
  double max_gap = 0.0;         // certified bound: true max <= sum_rate_max + max_gap
  TransmitProfile argmax;
  std::vector<Eigen::VectorXcd> argmin_vectors;  // per-user rank-one directions
};

/// Compute both extrema for a fixed channel realization. `tol` bounds the
/// first-order residual of the maximum (the Frank-Wolfe gap, which certifies
/// sum_rate_max to within tol by concavity).
Extrema reference_extrema(const ChannelState& channel, double tol,
                          const ExtremaOptions& options = {});

/// Projection of a Hermitian matrix onto the spectrahedron in Frobenius norm
/// (eigenvalues projected onto the probability simplex).
SpectraPoint project_to_spectrahedron(const HermitianMatrix& m);

}  // namespace dxl

// SPDX-License-Identifier: Apache-2.0

#include "dxl/extrema.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dxl/parallel.hpp"
#include "dxl/rng.hpp"

namespace dxl {

SpectraPoint project_to_spectrahedron(const HermitianMatrix& m) {
  const HermitianEig eig = herm_eig(m);
  // Euclidean projection of the spectrum onto the probability simplex
  // (sorted-threshold rule).
  Eigen::VectorXd v = eig.values;
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  int active = 0;
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / (i + 1);
    if (sorted[i] - candidate > 0.0) {
      theta = candidate;
      active = i + 1;
    }
  }
  (void)active;
  Eigen::VectorXd projected = (v.array() - theta).max(0.0);
  projected /= projected.sum();
  return trusted_spectra_point(spectral_assemble(eig, projected));
}

namespace {

struct PgaResult {
  TransmitProfile profile;
  double value = 0.0;
  double gap = 0.0;
  bool converged = false;
};

/// First-order optimality certificate for the concave maximization: the
/// Frank-Wolfe gap sum_k [lambda_max(grad_k) - tr(grad_k X_k)], which bounds
/// the suboptimality of the current profile from above.
double frank_wolfe_gap(const ChannelState& channel, const TransmitProfile& profile,
                       const std::vector<HermitianMatrix>& grads) {
  double gap = 0.0;
  for (int k = 0; k < channel.users(); ++k) {
    const HermitianEig eig = herm_eig(grads[k]);
    gap += eig.values.maxCoeff() - trace_inner(grads[k], profile.users[k].matrix());
  }
  return gap;
}

PgaResult projected_gradient_max(const ChannelState& channel, TransmitProfile profile,
                                 double tol, std::int64_t max_iters) {
  PgaResult result;
  double value = sum_rate(channel, profile);
  double step = 1.0;
  for (std::int64_t it = 0; it < max_iters; ++it) {
    const std::vector<HermitianMatrix> grads = rate_gradient_all_serial(channel, profile);
    const double gap = frank_wolfe_gap(channel, profile, grads);
    if (gap < tol) {
      result.converged = true;
      result.gap = gap;
      break;
    }
    result.gap = gap;
    // Monotone ascent with a non-increasing step: halve until the projected
    // step improves the sum rate.
    bool moved = false;
    while (step > 1e-12) {
      TransmitProfile candidate = profile;
      for (int k = 0; k < channel.users(); ++k) {
        candidate.users[k] =
            project_to_spectrahedron(profile.users[k].matrix() + grads[k] * step);
      }
      const double candidate_value = sum_rate(channel, candidate);
      if (candidate_value >= value) {
        profile = std::move(candidate);
        value = candidate_value;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      break;  // step underflow: first-order stationary to machine precision
    }
  }
  result.profile = std::move(profile);
  result.value = value;
  return result;
}

std::vector<Eigen::VectorXcd> random_unit_vectors(const ChannelState& channel,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXcd> dirs;
  dirs.reserve(channel.users());
  for (int k = 0; k < channel.users(); ++k) {
    Eigen::VectorXcd u(channel.tx_antennas(k));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u[i] = complex_gaussian(rng, normal);
    }
    const double norm = u.norm();
    dirs.push_back(norm > 0 ? (u / norm).eval() : Eigen::VectorXcd::Unit(u.size(), 0));
  }
  return dirs;
}

TransmitProfile rank_one_profile(const std::vector<Eigen::VectorXcd>& dirs) {
  TransmitProfile profile;
  profile.users.reserve(dirs.size());
  for (const Eigen::VectorXcd& u : dirs) {
    profile.users.push_back(trusted_spectra_point(HermitianMatrix(u * u.adjoint())));
  }
  return profile;
}

struct VertexResult {
  std::vector<Eigen::VectorXcd> dirs;
  double value = 0.0;
  bool converged = false;
};

/// Block-coordinate descent over rank-one vertices: for user k the sum rate is
/// logdet W_{-k} + log(1 + P_k u^H G_k u), minimized by the eigenvector of the
/// smallest eigenvalue of the whitened gain G_k.
VertexResult vertex_descent(const ChannelState& channel, std::vector<Eigen::VectorXcd> dirs,
                            int max_sweeps) {
  VertexResult result;
  TransmitProfile profile = rank_one_profile(dirs);
  double value = sum_rate(channel, profile);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (int k = 0; k < channel.users(); ++k) {
      const HermitianMatrix w_mui = mui_matrix(channel, profile, k);
      const MatrixXc solved = Eigen::LLT<MatrixXc>(w_mui.mat()).solve(channel.channels[k]);
      const HermitianMatrix gain{channel.channels[k].adjoint() * solved};
      const HermitianEig eig = herm_eig(gain);
      Eigen::VectorXcd u = eig.vectors.col(0);  // ascending order: smallest first
      TransmitProfile candidate = profile;
      candidate.users[k] = trusted_spectra_point(HermitianMatrix(u * u.adjoint()));
      const double candidate_value = sum_rate(channel, candidate);
      if (candidate_value < value - 1e-12) {
        profile = std::move(candidate);
        dirs[k] = std::move(u);
        value = candidate_value;
        changed = true;
      }
    }
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  result.dirs = std::move(dirs);
  result.value = value;
  return result;
}

}  // namespace

Extrema reference_extrema(const ChannelState& channel, double tol,
                          const ExtremaOptions& options) {
  channel.validate();
  Extrema out;

  // --- maximum: seeded projected-gradient ascents, best value wins ---
  std::vector<TransmitProfile> starts;
  starts.push_back(options.warm_max ? *options.warm_max : TransmitProfile::Uniform(channel));
  for (int s = 1; s < options.starts; ++s) {
    TransmitProfile p;
    for (int k = 0; k < channel.users(); ++k) {
      p.users.push_back(exp_project(
          random_hermitian(channel.tx_antennas(k), 2.0,
                           mix_seed(options.seed, 0x6d6178u, static_cast<std::uint64_t>(s),
                                    static_cast<std::uint64_t>(k)))));
    }
    starts.push_back(std::move(p));
  }

  std::vector<PgaResult> max_runs(starts.size());
  auto run_start = [&](std::int64_t s) {
    max_runs[s] = projected_gradient_max(channel, starts[s], tol, options.max_iters);
  };
  if (options.parallel) {
    par::parallel_for(static_cast<std::int64_t>(starts.size()), run_start);
  } else {
    par::serial_for(static_cast<std::int64_t>(starts.size()), run_start);
  }
  std::size_t best_max = 0;
  for (std::size_t s = 1; s < max_runs.size(); ++s) {
    if (max_runs[s].value > max_runs[best_max].value) {
      best_max = s;
    }
  }
  out.sum_rate_max = max_runs[best_max].value;
  out.max_converged = max_runs[best_max].converged;
  out.max_gap = max_runs[best_max].gap;
  out.argmax = max_runs[best_max].profile;

  // --- minimum: random rank-one vertices, best candidates polished by BCD ---
  const int restarts = std::max(1, options.restarts);
  std::vector<std::vector<Eigen::VectorXcd>> candidates(restarts);
  std::vector<double> values(restarts);
  auto eval_candidate = [&](std::int64_t r) {
    candidates[r] = (r == 0 && options.warm_min)
                        ? *options.warm_min
                        : random_unit_vectors(channel, mix_seed(options.seed, 0x6d696eu,
                                                                static_cast<std::uint64_t>(r)));
    values[r] = sum_rate(channel, rank_one_profile(candidates[r]));
  };
  if (options.parallel) {
    par::parallel_for(restarts, eval_candidate);
  } else {
    par::serial_for(restarts, eval_candidate);
  }

  std::vector<int> order(restarts);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });
  const int polish = std::min<int>(options.polish_candidates, restarts);

  std::vector<VertexResult> min_runs(polish);
  auto run_polish = [&](std::int64_t i) {
    min_runs[i] = vertex_descent(channel, candidates[order[i]], options.max_sweeps);
  };
  if (options.parallel) {
    par::parallel_for(polish, run_polish);
  } else {
    par::serial_for(polish, run_polish);
  }
  std::size_t best_min = 0;
  for (std::size_t i = 1; i < min_runs.size(); ++i) {
    if (min_runs[i].value < min_runs[best_min].value) {
      best_min = i;
    }
  }
  out.sum_rate_min = min_runs[best_min].value;
  out.min_converged = min_runs[best_min].converged;
  out.argmin_vectors = min_runs[best_min].dirs;

  return out;
}

}  // namespace dxl

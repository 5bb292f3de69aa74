// SPDX-License-Identifier: Apache-2.0

#include "dxl/waterfilling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dxl {

std::vector<double> single_user_waterfill(std::span<const double> gains, double power) {
  if (gains.empty() || power <= 0.0) {
    throw std::invalid_argument("single_user_waterfill: need gains and power > 0");
  }
  for (double g : gains) {
    if (g < 0.0) {
      throw std::invalid_argument("single_user_waterfill: gains must be non-negative");
    }
  }
  const int n = static_cast<int>(gains.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return gains[a] > gains[b]; });
  if (gains[order[0]] <= 0.0) {
    throw std::domain_error("single_user_waterfill: all subchannel gains are zero");
  }

  // Active-set sweep: with the m strongest channels active the level is
  // mu_m = (P + sum 1/g_i)/m; keep the largest m whose weakest member stays
  // strictly above water (boundary channels are left dry).
  double inv_sum = 0.0;
  double mu = 0.0;
  int active = 0;
  for (int m = 1; m <= n; ++m) {
    const double g = gains[order[m - 1]];
    if (g <= 0.0) break;
    const double candidate_inv_sum = inv_sum + 1.0 / g;
    const double candidate_mu = (power + candidate_inv_sum) / m;
    if (candidate_mu - 1.0 / g <= 0.0) break;
    inv_sum = candidate_inv_sum;
    mu = candidate_mu;
    active = m;
  }

  std::vector<double> alloc(n, 0.0);
  for (int m = 0; m < active; ++m) {
    alloc[order[m]] = mu - 1.0 / gains[order[m]];
  }
  return alloc;
}

SpectraPoint waterfill_gain_matrix(const HermitianMatrix& gain, double power) {
  const HermitianEig eig = herm_eig(gain);
  Eigen::VectorXd gains = eig.values.cwiseMax(0.0);  // clamp estimator roundoff
  std::vector<double> g(gains.data(), gains.data() + gains.size());
  const std::vector<double> alloc = single_user_waterfill(g, power);
  Eigen::VectorXd x(gain.dim());
  for (int i = 0; i < gain.dim(); ++i) {
    x[i] = alloc[i] / power;
  }
  // Renormalize away the waterfill roundoff so the trace is exactly one.
  x /= x.sum();
  return trusted_spectra_point(spectral_assemble(eig, x));
}

HermitianMatrix effective_gain(const ChannelState& channel, const TransmitProfile& profile,
                               int k) {
  const HermitianMatrix w_mui = mui_matrix(channel, profile, k);
  const MatrixXc solved = Eigen::LLT<MatrixXc>(w_mui.mat()).solve(channel.channels[k]);
  return HermitianMatrix(channel.channels[k].adjoint() * solved);
}

SpectraPoint best_response(const ChannelState& channel, const TransmitProfile& profile, int k) {
  return waterfill_gain_matrix(effective_gain(channel, profile, k), channel.powers[k]);
}

namespace {

double profile_distance(const TransmitProfile& a, const TransmitProfile& b) {
  double sq = 0.0;
  for (std::size_t k = 0; k < a.users.size(); ++k) {
    sq += (a.users[k].matrix().mat() - b.users[k].matrix().mat()).squaredNorm();
  }
  return std::sqrt(sq);
}

WaterfillRun waterfill_loop(const ChannelState& channel, const TransmitProfile& start,
                            int max_sweeps, double tol, bool simultaneous) {
  channel.validate();
  WaterfillRun run;
  TransmitProfile profile = start;
  run.trajectory.push_back(profile);
  run.sum_rates.push_back(sum_rate(channel, profile));

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    TransmitProfile previous = profile;
    if (simultaneous) {
      TransmitProfile next = profile;
      for (int k = 0; k < channel.users(); ++k) {
        next.users[k] = best_response(channel, previous, k);
      }
      profile = std::move(next);
    } else {
      for (int k = 0; k < channel.users(); ++k) {
        profile.users[k] = best_response(channel, profile, k);
        run.update_sum_rates.push_back(sum_rate(channel, profile));
      }
    }
    run.sweeps = sweep;
    run.trajectory.push_back(profile);
    run.sum_rates.push_back(sum_rate(channel, profile));
    if (profile_distance(profile, previous) < tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

}  // namespace

WaterfillRun iwf_run(const ChannelState& channel, const TransmitProfile& start, int max_sweeps,
                     double tol) {
  return waterfill_loop(channel, start, max_sweeps, tol, /*simultaneous=*/false);
}

WaterfillRun swf_run(const ChannelState& channel, const TransmitProfile& start, int max_sweeps,
                     double tol) {
  return waterfill_loop(channel, start, max_sweeps, tol, /*simultaneous=*/true);
}

}  // namespace dxl

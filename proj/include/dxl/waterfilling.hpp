// SPDX-License-Identifier: Apache-2.0
//
// Iterative and simultaneous water-filling baselines for the rate
// maximization game: classical eigen-waterfilling against the
// interference-whitened effective channel.

#pragma once

#include <span>
#include <vector>

#include "dxl/mimo.hpp"

namespace dxl {

/// Classical water-filling: q_i = max(0, mu - 1/g_i) with the water level mu
/// chosen so sum q_i = P; maximizes sum log(1 + g_i q_i). Subchannels whose
/// gain sits exactly at the water level get zero (deterministic tie-break).
std::vector<double> single_user_waterfill(std::span<const double> gains, double power);

/// Waterfill a power budget over the eigenvalues of an effective channel
/// gain matrix G (Hermitian PSD) and return the normalized covariance in G's
/// eigenbasis. Exposed so harnesses can best-respond to noisy gain matrices.
SpectraPoint waterfill_gain_matrix(const HermitianMatrix& gain, double power);

/// Rate-maximizing response of user k with all other users held fixed:
/// eigen-waterfill P_k over H_k^H W_{-k}^{-1} H_k.
SpectraPoint best_response(const ChannelState& channel, const TransmitProfile& profile, int k);

/// The effective (interference-whitened) gain matrix H_k^H W_{-k}^{-1} H_k.
HermitianMatrix effective_gain(const ChannelState& channel, const TransmitProfile& profile,
                               int k);

struct WaterfillRun {
  std::vector<TransmitProfile> trajectory;  // length = sweeps + 1
  std::vector<double> sum_rates;            // per sweep, aligned with trajectory
  std::vector<double> update_sum_rates;     // after every individual update (iterative runs)
  bool converged = false;
  int sweeps = 0;
};

/// Iterative water-filling: users best-respond one after the other in
/// round-robin order; stops when a sweep moves the profile by less than tol
/// in Frobenius norm. Convergent; sum rate non-decreasing per update.
WaterfillRun iwf_run(const ChannelState& channel, const TransmitProfile& start, int max_sweeps,
                     double tol);

/// Simultaneous water-filling: all users best-respond at once against the
/// previous profile. Not guaranteed to converge; the flag reports honestly.
WaterfillRun swf_run(const ChannelState& channel, const TransmitProfile& start, int max_sweeps,
                     double tol);

}  // namespace dxl

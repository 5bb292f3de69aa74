// SPDX-License-Identifier: Apache-2.0
//
// Multi-user MIMO multiple-access-channel model: channel state, achievable
// rates, the sum-rate potential, rate gradients, and fading processes
// (static, i.i.d. Gaussian, Jakes sum-of-sinusoids).

#pragma once

#include <cstdint>
#include <vector>

#include "dxl/hermitian.hpp"

namespace dxl {

/// K transmitters with M_k antennas each facing one N-antenna receiver.
/// channels[k] is the N x M_k transfer matrix, powers[k] the transmit power.
struct ChannelState {
  int rx_antennas = 0;
  std::vector<MatrixXc> channels;
  std::vector<double> powers;

  int users() const { return static_cast<int>(channels.size()); }
  int tx_antennas(int k) const { return static_cast<int>(channels[k].cols()); }
  void validate() const;
};

/// Per-user normalized covariances X_k = Q_k / P_k (unit trace, PSD).
struct TransmitProfile {
  std::vector<SpectraPoint> users;

  static TransmitProfile Uniform(const ChannelState& channel);
};

/// W(X; H) = I + sum_k P_k H_k X_k H_k^H; N x N, >= I.
HermitianMatrix aggregate_covariance(const ChannelState& channel, const TransmitProfile& profile);

/// Multi-user interference-plus-noise of user k: W with user k's term removed.
HermitianMatrix mui_matrix(const ChannelState& channel, const TransmitProfile& profile, int k);

/// log det over the PSD cone, via Cholesky (input must be positive-definite).
double logdet(const HermitianMatrix& a);

/// Achievable rate of user k in nats for one channel realization:
/// logdet(W) - logdet(W_{-k}) >= 0.
double user_rate(const ChannelState& channel, const TransmitProfile& profile, int k);

/// logdet(W): the decoded sum rate for one realization, in nats.
double sum_rate(const ChannelState& channel, const TransmitProfile& profile);

/// The convex potential the solver minimizes: -sum_rate.
double sum_rate_potential(const ChannelState& channel, const TransmitProfile& profile);

/// Gradient of logdet W with respect to X_k: P_k H_k^H W^{-1} H_k (PSD,
/// M_k x M_k). Solvers minimizing the potential consume its negation.
HermitianMatrix rate_gradient(const ChannelState& channel, const TransmitProfile& profile, int k);

/// All users' gradients in one receiver broadcast. The parallel kernel writes
/// per-user slots and is bitwise identical to the serial reference.
std::vector<HermitianMatrix> rate_gradient_all(const ChannelState& channel,
                                               const TransmitProfile& profile);
std::vector<HermitianMatrix> rate_gradient_all_serial(const ChannelState& channel,
                                                      const TransmitProfile& profile);

/// Normalized progress between the feasible extremes of the sum rate;
/// 1 at equilibrium, 0 at the feasible minimum. Inputs are sum rates
/// (positive orientation). Clamped to [0, 1.05]; raw values above 1 indicate
/// inaccurate reference extrema and are left visible up to the clamp.
double efficiency(double sum_rate_n, double sum_rate_max, double sum_rate_min);

enum class FadingKind { kStatic, kIidGaussian, kJakes };

/// Channel evolution law. Entries have unit average power; draws are pure
/// functions of (seed, user, entry, epoch), so sampling is random-access and
/// trivially reproducible.
struct FadingProcess {
  FadingKind kind = FadingKind::kStatic;
  double carrier_hz = 2.0e9;
  double velocity_mps = 0.0;
  double period_s = 1e-3;   // epoch duration
  int oscillators = 16;     // sum-of-sinusoids size per entry
  std::uint64_t seed = 0;

  /// Doppler spread v * f / c.
  double doppler_hz() const;

  /// Per-user channel matrices at integer epoch t >= 0.
  std::vector<MatrixXc> sample(int rx_antennas, const std::vector<int>& tx_antennas,
                               std::int64_t t) const;

  static FadingProcess Static(std::uint64_t seed) {
    return {FadingKind::kStatic, 0.0, 0.0, 1e-3, 0, seed};
  }
  static FadingProcess IidGaussian(std::uint64_t seed) {
    return {FadingKind::kIidGaussian, 0.0, 0.0, 1e-3, 0, seed};
  }
  static FadingProcess Jakes(double carrier_hz, double velocity_mps, double period_s,
                             int oscillators, std::uint64_t seed) {
    return {FadingKind::kJakes, carrier_hz, velocity_mps, period_s, oscillators, seed};
  }
};

/// Speed of light used for the Doppler spread, m/s.
inline constexpr double kLightSpeed = 2.998e8;

}  // namespace dxl

// SPDX-License-Identifier: Apache-2.0

#include "dxl/mimo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dxl/rng.hpp"

namespace dxl {

void ChannelState::validate() const {
  if (rx_antennas < 1 || channels.empty()) {
    throw std::invalid_argument("ChannelState: need rx antennas and at least one user");
  }
  if (powers.size() != channels.size()) {
    throw std::invalid_argument("ChannelState: one power level per user required");
  }
  for (int k = 0; k < users(); ++k) {
    if (channels[k].rows() != rx_antennas || channels[k].cols() < 1) {
      throw std::invalid_argument("ChannelState: channel matrix of user " + std::to_string(k) +
                                  " has inconsistent dimensions");
    }
    if (!channels[k].allFinite()) {
      throw std::invalid_argument("ChannelState: non-finite channel entries for user " +
                                  std::to_string(k));
    }
    if (powers[k] <= 0.0) {
      throw std::invalid_argument("ChannelState: powers must be > 0");
    }
  }
}

TransmitProfile TransmitProfile::Uniform(const ChannelState& channel) {
  TransmitProfile profile;
  profile.users.reserve(channel.users());
  for (int k = 0; k < channel.users(); ++k) {
    profile.users.push_back(SpectraPoint::Uniform(channel.tx_antennas(k)));
  }
  return profile;
}

namespace {

void check_instance(const ChannelState& channel, const TransmitProfile& profile) {
  if (static_cast<int>(profile.users.size()) != channel.users()) {
    throw std::invalid_argument("mimo: profile/channel user count mismatch");
  }
  for (int k = 0; k < channel.users(); ++k) {
    if (profile.users[k].dim() != channel.tx_antennas(k)) {
      throw std::invalid_argument("mimo: profile dimension mismatch for user " +
                                  std::to_string(k));
    }
  }
}

MatrixXc covariance_excluding(const ChannelState& channel, const TransmitProfile& profile,
                              int skip) {
  const int n = channel.rx_antennas;
  MatrixXc w = MatrixXc::Identity(n, n);
  for (int k = 0; k < channel.users(); ++k) {
    if (k == skip) continue;
    w.noalias() += channel.powers[k] * channel.channels[k] * profile.users[k].matrix().mat() *
                   channel.channels[k].adjoint();
  }
  return w;
}

}  // namespace

HermitianMatrix aggregate_covariance(const ChannelState& channel, const TransmitProfile& profile) {
  check_instance(channel, profile);
  return HermitianMatrix(covariance_excluding(channel, profile, -1));
}

HermitianMatrix mui_matrix(const ChannelState& channel, const TransmitProfile& profile, int k) {
  check_instance(channel, profile);
  if (k < 0 || k >= channel.users()) {
    throw std::invalid_argument("mui_matrix: user index out of range");
  }
  return HermitianMatrix(covariance_excluding(channel, profile, k));
}

double logdet(const HermitianMatrix& a) {
  Eigen::LLT<MatrixXc> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    throw eigensolver_error("logdet: Cholesky failed, matrix not positive-definite (dim=" +
                            std::to_string(a.dim()) + ")");
  }
  double ld = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    ld += std::log(llt.matrixLLT()(i, i).real());
  }
  return 2.0 * ld;
}

double user_rate(const ChannelState& channel, const TransmitProfile& profile, int k) {
  return logdet(aggregate_covariance(channel, profile)) - logdet(mui_matrix(channel, profile, k));
}

double sum_rate(const ChannelState& channel, const TransmitProfile& profile) {
  return logdet(aggregate_covariance(channel, profile));
}

double sum_rate_potential(const ChannelState& channel, const TransmitProfile& profile) {
  return -sum_rate(channel, profile);
}

HermitianMatrix rate_gradient(const ChannelState& channel, const TransmitProfile& profile,
                              int k) {
  check_instance(channel, profile);
  if (k < 0 || k >= channel.users()) {
    throw std::invalid_argument("rate_gradient: user index out of range");
  }
  const MatrixXc w = covariance_excluding(channel, profile, -1);
  const MatrixXc solved = Eigen::LLT<MatrixXc>(w).solve(channel.channels[k]);
  return HermitianMatrix(channel.powers[k] * channel.channels[k].adjoint() * solved);
}

namespace {

std::vector<HermitianMatrix> gradient_broadcast(const ChannelState& channel,
                                                const TransmitProfile& profile, bool parallel) {
  check_instance(channel, profile);
  const int n = channel.rx_antennas;
  const MatrixXc w = covariance_excluding(channel, profile, -1);
  const MatrixXc w_inv = Eigen::LLT<MatrixXc>(w).solve(MatrixXc::Identity(n, n));

  const int users = channel.users();
  std::vector<HermitianMatrix> grads(users, HermitianMatrix::Zero(1));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int k = 0; k < users; ++k) {
    grads[k] = HermitianMatrix(channel.powers[k] * channel.channels[k].adjoint() * w_inv *
                               channel.channels[k]);
  }
#ifndef _OPENMP
  (void)parallel;
#endif
  return grads;
}

}  // namespace

std::vector<HermitianMatrix> rate_gradient_all(const ChannelState& channel,
                                               const TransmitProfile& profile) {
  return gradient_broadcast(channel, profile, true);
}

std::vector<HermitianMatrix> rate_gradient_all_serial(const ChannelState& channel,
                                                      const TransmitProfile& profile) {
  return gradient_broadcast(channel, profile, false);
}

double efficiency(double sum_rate_n, double sum_rate_max, double sum_rate_min) {
  if (!(sum_rate_max > sum_rate_min)) {
    throw std::domain_error("efficiency: reference extrema are degenerate (max <= min)");
  }
  const double raw = (sum_rate_n - sum_rate_min) / (sum_rate_max - sum_rate_min);
  return std::clamp(raw, 0.0, 1.05);
}

double FadingProcess::doppler_hz() const { return velocity_mps * carrier_hz / kLightSpeed; }

namespace {

double unit_uniform(std::uint64_t s) {
  return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

MatrixXc gaussian_channel(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXc h(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      h(i, j) = complex_gaussian(rng, normal);
    }
  }
  return h;
}

}  // namespace

std::vector<MatrixXc> FadingProcess::sample(int rx_antennas, const std::vector<int>& tx_antennas,
                                            std::int64_t t) const {
  if (t < 0) {
    throw std::invalid_argument("FadingProcess: epochs are non-negative");
  }
  std::vector<MatrixXc> draw;
  draw.reserve(tx_antennas.size());
  for (int k = 0; k < static_cast<int>(tx_antennas.size()); ++k) {
    const int m = tx_antennas[k];
    switch (kind) {
      case FadingKind::kStatic:
        draw.push_back(gaussian_channel(rx_antennas, m,
                                        mix_seed(seed, 0x535441u, static_cast<std::uint64_t>(k))));
        break;
      case FadingKind::kIidGaussian:
        draw.push_back(gaussian_channel(rx_antennas, m,
                                        mix_seed(seed, 0x494944u, static_cast<std::uint64_t>(k),
                                                 static_cast<std::uint64_t>(t))));
        break;
      case FadingKind::kJakes: {
        const double omega_d = 2.0 * M_PI * doppler_hz();
        const double time_s = static_cast<double>(t) * period_s;
        MatrixXc h(rx_antennas, m);
        for (int i = 0; i < rx_antennas; ++i) {
          for (int j = 0; j < m; ++j) {
            const std::uint64_t base =
                mix_seed(seed, 0x4a414bu, static_cast<std::uint64_t>(k),
                         static_cast<std::uint64_t>(i) * 1000003u + static_cast<std::uint64_t>(j));
            Complex acc(0.0, 0.0);
            for (int osc = 0; osc < oscillators; ++osc) {
              // Arrival angle jittered within its sector; independent phase.
              const double u_angle = unit_uniform(base + 2 * static_cast<std::uint64_t>(osc));
              const double u_phase = unit_uniform(base + 2 * static_cast<std::uint64_t>(osc) + 1);
              const double alpha = 2.0 * M_PI * (osc + u_angle) / oscillators;
              const double phase = omega_d * std::cos(alpha) * time_s + 2.0 * M_PI * u_phase;
              acc += Complex(std::cos(phase), std::sin(phase));
            }
            h(i, j) = acc / std::sqrt(static_cast<double>(oscillators));
          }
        }
        draw.push_back(std::move(h));
        break;
      }
    }
  }
  return draw;
}

}  // namespace dxl

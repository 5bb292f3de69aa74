// SPDX-License-Identifier: Apache-2.0
//
// Multi-agent discounted exponential learning with per-agent update timers,
// partial update sets and bounded observation delays, reduced to a
// deterministic discrete-event simulation over integer epochs.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <vector>

#include "dxl/solver.hpp"

namespace dxl {

enum class UpdateKind { kRoundRobin, kAllAtOnce, kPoisson };

/// Which agents revise at each global epoch. Round-robin visits agents
/// cyclically, all-at-once updates everyone, poisson merges seeded exponential
/// clocks (one epoch per firing; simultaneous firings share an epoch).
class UpdateSchedule {
 public:
  UpdateSchedule(UpdateKind kind, int agents, std::uint64_t seed = 0,
                 std::vector<double> rates = {});

  static UpdateSchedule RoundRobin(int agents);
  static UpdateSchedule AllAtOnce(int agents);
  static UpdateSchedule Poisson(std::vector<double> rates, std::uint64_t seed);

  /// Agents updating at the given epoch (1-based); never empty.
  std::vector<int> update_set(std::int64_t epoch) const;

  int agents() const { return agents_; }
  UpdateKind kind() const { return kind_; }

 private:
  void extend_poisson_cache(std::int64_t epoch) const;

  UpdateKind kind_;
  int agents_;
  std::uint64_t seed_;
  std::vector<double> rates_;

  // Poisson event sequence, generated on demand; owned by one run at a time.
  mutable std::vector<std::vector<int>> poisson_events_;
  mutable std::vector<double> next_fire_;
  mutable std::mt19937_64 poisson_rng_;
};

enum class DelayKind { kZero, kFixed, kUniformRandom };

/// Bounded observation staleness: the profile an agent sees at epoch n is
/// d_k(n) epochs old, d_k(n) <= max_delay. Draws are counter-based, so the
/// model is stateless and delays are a pure function of (seed, agent, epoch).
struct DelayModel {
  DelayKind kind = DelayKind::kZero;
  int max_delay = 0;
  std::uint64_t seed = 0;

  int delay(int agent, std::int64_t epoch) const;

  static DelayModel Zero() { return {DelayKind::kZero, 0, 0}; }
  static DelayModel Fixed(int d) { return {DelayKind::kFixed, d, 0}; }
  static DelayModel UniformRandom(int max_d, std::uint64_t seed) {
    return {DelayKind::kUniformRandom, max_d, seed};
  }
};

/// Per-agent oracle over the (possibly stale) joint profile.
class MultiAgentOracle {
 public:
  using Fn = std::function<HermitianMatrix(const std::vector<SpectraPoint>&, std::int64_t,
                                           std::mt19937_64&)>;

  MultiAgentOracle(int dim, double bound, Fn fn) : dim_(dim), bound_(bound), fn_(std::move(fn)) {}

  HermitianMatrix evaluate(const std::vector<SpectraPoint>& profile, std::int64_t epoch,
                           std::mt19937_64& rng) const {
    return fn_(profile, epoch, rng);
  }

  int dim() const { return dim_; }
  double bound() const { return bound_; }

  /// Separable linear objective tr(C_k X_k): gradient is the constant C_k.
  static MultiAgentOracle Linear(const HermitianMatrix& c);

 private:
  int dim_;
  double bound_;
  Fn fn_;
};

struct MultiAgentState {
  std::vector<AgentState> agents;
  std::int64_t epoch = 0;                  // global epoch n
  std::vector<std::int64_t> local_iters;   // n_k = #{j <= n : k in K_j}
  std::deque<std::vector<SpectraPoint>> history;  // joint profiles, newest last

  static MultiAgentState Initial(const std::vector<int>& dims, int history_depth);

  const std::vector<SpectraPoint>& profile_at_lag(int lag) const;
  std::vector<SpectraPoint> current_profile() const;
};

/// Apply one discounted update to agent k only; gamma must be the step size at
/// the agent's local counter. Throws if k was not scheduled this epoch.
MultiAgentState async_step(const MultiAgentState& state, int k, const HermitianMatrix& grad,
                           const StepSchedule& schedule, double tau,
                           const std::vector<int>& update_set);

struct AsyncConfig {
  double tau = 0.1;
  StepSchedule schedule = StepSchedule::Harmonic(1.0);
  std::int64_t horizon = 1000;
  std::uint64_t seed = 0;
  std::int64_t record_stride = 0;  // 0: record initial and final only

  /// Invoked after every epoch with the post-update state, the epoch's update
  /// set and the gradients consumed (agent index, estimate). Harnesses use it
  /// to log rows without retaining full trajectories.
  using Observer = std::function<void(const MultiAgentState&, const std::vector<int>&,
                                      const std::vector<std::pair<int, HermitianMatrix>>&)>;
  Observer observer;
};

struct AsyncResult {
  std::vector<MultiAgentState> trajectory;
  std::int64_t epochs = 0;

  const MultiAgentState& final_state() const { return trajectory.back(); }
};

/// Drive the multi-agent recursion for config.horizon epochs. Oracle k is fed
/// the joint profile from delay(k, n) epochs ago; per-agent rng streams are
/// derived from config.seed so trajectories are reproducible.
AsyncResult run_async(const std::vector<MultiAgentOracle>& oracles,
                      const UpdateSchedule& schedule, const DelayModel& delays,
                      const AsyncConfig& config);

}  // namespace dxl

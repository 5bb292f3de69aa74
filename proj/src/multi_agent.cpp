// SPDX-License-Identifier: Apache-2.0

#include "dxl/multi_agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dxl/rng.hpp"

namespace dxl {

UpdateSchedule::UpdateSchedule(UpdateKind kind, int agents, std::uint64_t seed,
                               std::vector<double> rates)
    : kind_(kind), agents_(agents), seed_(seed), rates_(std::move(rates)) {
  if (agents_ < 1) {
    throw std::invalid_argument("UpdateSchedule: need at least one agent");
  }
  if (kind_ == UpdateKind::kPoisson) {
    if (static_cast<int>(rates_.size()) != agents_) {
      throw std::invalid_argument("UpdateSchedule: poisson needs one rate per agent");
    }
    for (double r : rates_) {
      if (r <= 0.0) {
        throw std::invalid_argument("UpdateSchedule: poisson rates must be > 0");
      }
    }
    poisson_rng_.seed(mix_seed(seed_, 0x706f6973));
    next_fire_.resize(agents_);
    for (int k = 0; k < agents_; ++k) {
      next_fire_[k] =
          std::exponential_distribution<double>(rates_[k])(poisson_rng_);
    }
  }
}

UpdateSchedule UpdateSchedule::RoundRobin(int agents) {
  return UpdateSchedule(UpdateKind::kRoundRobin, agents);
}

UpdateSchedule UpdateSchedule::AllAtOnce(int agents) {
  return UpdateSchedule(UpdateKind::kAllAtOnce, agents);
}

UpdateSchedule UpdateSchedule::Poisson(std::vector<double> rates, std::uint64_t seed) {
  const int agents = static_cast<int>(rates.size());
  return UpdateSchedule(UpdateKind::kPoisson, agents, seed, std::move(rates));
}

void UpdateSchedule::extend_poisson_cache(std::int64_t epoch) const {
  while (static_cast<std::int64_t>(poisson_events_.size()) < epoch) {
    const double t = *std::min_element(next_fire_.begin(), next_fire_.end());
    std::vector<int> fired;
    for (int k = 0; k < agents_; ++k) {
      if (next_fire_[k] == t) {
        fired.push_back(k);
        next_fire_[k] +=
            std::exponential_distribution<double>(rates_[k])(poisson_rng_);
      }
    }
    poisson_events_.push_back(std::move(fired));
  }
}

std::vector<int> UpdateSchedule::update_set(std::int64_t epoch) const {
  if (epoch < 1) {
    throw std::invalid_argument("UpdateSchedule: epochs are 1-based");
  }
  switch (kind_) {
    case UpdateKind::kRoundRobin:
      return {static_cast<int>((epoch - 1) % agents_)};
    case UpdateKind::kAllAtOnce: {
      std::vector<int> all(agents_);
      for (int k = 0; k < agents_; ++k) all[k] = k;
      return all;
    }
    case UpdateKind::kPoisson:
      extend_poisson_cache(epoch);
      return poisson_events_[epoch - 1];
  }
  throw std::logic_error("UpdateSchedule: unknown kind");
}

int DelayModel::delay(int agent, std::int64_t epoch) const {
  switch (kind) {
    case DelayKind::kZero:
      return 0;
    case DelayKind::kFixed:
      return max_delay;
    case DelayKind::kUniformRandom: {
      const std::uint64_t u = mix_seed(seed, static_cast<std::uint64_t>(agent),
                                       static_cast<std::uint64_t>(epoch));
      return static_cast<int>(u % static_cast<std::uint64_t>(max_delay + 1));
    }
  }
  throw std::logic_error("DelayModel: unknown kind");
}

MultiAgentOracle MultiAgentOracle::Linear(const HermitianMatrix& c) {
  const HermitianEig eig = herm_eig(c);
  const double bound = eig.values.cwiseAbs().maxCoeff();
  return MultiAgentOracle(
      c.dim(), bound,
      [c](const std::vector<SpectraPoint>&, std::int64_t, std::mt19937_64&) { return c; });
}

MultiAgentState MultiAgentState::Initial(const std::vector<int>& dims, int history_depth) {
  MultiAgentState state;
  state.agents.reserve(dims.size());
  state.local_iters.assign(dims.size(), 0);
  for (int d : dims) {
    state.agents.push_back(AgentState::Initial(d));
  }
  state.history.push_back(state.current_profile());
  (void)history_depth;  // the deque grows to depth max_delay + 1 during the run
  return state;
}

const std::vector<SpectraPoint>& MultiAgentState::profile_at_lag(int lag) const {
  if (lag < 0 || lag >= static_cast<int>(history.size())) {
    // Early epochs clamp to the oldest retained profile.
    lag = static_cast<int>(history.size()) - 1;
  }
  return history[history.size() - 1 - static_cast<std::size_t>(lag)];
}

std::vector<SpectraPoint> MultiAgentState::current_profile() const {
  std::vector<SpectraPoint> profile;
  profile.reserve(agents.size());
  for (const AgentState& a : agents) {
    profile.push_back(a.point);
  }
  return profile;
}

MultiAgentState async_step(const MultiAgentState& state, int k, const HermitianMatrix& grad,
                           const StepSchedule& schedule, double tau,
                           const std::vector<int>& update_set) {
  if (std::find(update_set.begin(), update_set.end(), k) == update_set.end()) {
    throw std::logic_error("async_step: agent " + std::to_string(k) +
                           " is not in the current update set");
  }
  MultiAgentState next = state;
  const std::int64_t local = state.local_iters[k] + 1;
  const double gamma = schedule.gamma(local);
  next.agents[k] = dxl_step(state.agents[k], grad, gamma, tau);
  next.local_iters[k] = local;
  return next;
}

AsyncResult run_async(const std::vector<MultiAgentOracle>& oracles,
                      const UpdateSchedule& schedule, const DelayModel& delays,
                      const AsyncConfig& config) {
  const int agents = static_cast<int>(oracles.size());
  if (agents != schedule.agents()) {
    throw std::invalid_argument("run_async: schedule/oracle agent count mismatch");
  }
  if (config.tau <= 0.0) {
    throw std::invalid_argument("run_async: tau must be > 0");
  }
  config.schedule.validate();

  std::vector<int> dims(agents);
  for (int k = 0; k < agents; ++k) dims[k] = oracles[k].dim();
  const int depth = delays.max_delay + 1;
  MultiAgentState state = MultiAgentState::Initial(dims, depth);

  std::vector<std::mt19937_64> rngs;
  rngs.reserve(agents);
  for (int k = 0; k < agents; ++k) {
    rngs.emplace_back(mix_seed(config.seed, static_cast<std::uint64_t>(k)));
  }

  AsyncResult result;
  result.trajectory.push_back(state);

  for (std::int64_t n = 1; n <= config.horizon; ++n) {
    const std::vector<int> active = schedule.update_set(n);
    // Gradients are evaluated against pre-update (possibly stale) profiles, so
    // simultaneous updates within an epoch do not see one another.
    std::vector<std::pair<int, HermitianMatrix>> grads;
    grads.reserve(active.size());
    for (int k : active) {
      const int lag = delays.delay(k, n);
      const std::vector<SpectraPoint>& profile = state.profile_at_lag(lag);
      grads.emplace_back(k, oracles[k].evaluate(profile, n, rngs[k]));
    }
    for (const auto& [k, grad] : grads) {
      // In-place form of async_step; agents outside the set are untouched.
      const std::int64_t local = ++state.local_iters[k];
      const double gamma = config.schedule.gamma(local);
      state.agents[k] = dxl_step(state.agents[k], grad, gamma, config.tau);
    }
    state.epoch = n;
    state.history.push_back(state.current_profile());
    while (static_cast<int>(state.history.size()) > depth) {
      state.history.pop_front();
    }
    if (config.observer) {
      config.observer(state, active, grads);
    }
    if (config.record_stride > 0 && n % config.record_stride == 0 && n < config.horizon) {
      result.trajectory.push_back(state);
    }
  }
  result.trajectory.push_back(state);
  result.epochs = config.horizon;
  return result;
}

}  // namespace dxl

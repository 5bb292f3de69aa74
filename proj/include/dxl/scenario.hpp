// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration: a strict, versioned JSON schema describing one
// experiment (system shape, fading, solver, schedules, noise, baselines).
// Unknown keys are rejected; the canonical form is hashed for the audit trail.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dxl/mimo.hpp"
#include "dxl/multi_agent.hpp"
#include "dxl/solver.hpp"

namespace dxl {

inline constexpr int kScenarioSchemaVersion = 1;

struct SystemSpec {
  int users = 1;
  int rx_antennas = 1;
  // Per-user transmit antennas: fixed count, explicit list, or uniform range.
  std::optional<int> tx_fixed;
  std::optional<std::vector<int>> tx_list;
  std::optional<std::pair<int, int>> tx_range;
  // Transmit power: shared scalar or per-user list.
  double power = 1.0;
  std::optional<std::vector<double>> power_list;

  std::vector<int> tx_antennas(std::uint64_t seed) const;
  std::vector<double> powers() const;
};

enum class EngineKind { kSync, kAsync };

enum class NoiseKind { kNone, kAdditive, kSampledFeedback };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kNone;
  double eta = 0.0;
  int signal_samples = 0;   // S for the precision estimator
  int channel_samples = 0;  // S for the gradient estimator
};

struct FadingSpec {
  FadingKind kind = FadingKind::kStatic;
  double carrier_hz = 2.0e9;
  double velocity_mps = 0.0;
  double period_s = 1e-3;
  int oscillators = 16;

  FadingProcess process(std::uint64_t seed) const;
};

struct UpdateSpec {
  UpdateKind kind = UpdateKind::kAllAtOnce;
  std::vector<double> rates;  // poisson only

  UpdateSchedule schedule(int agents, std::uint64_t seed) const;
};

struct DelaySpec {
  DelayKind kind = DelayKind::kZero;
  int max_delay = 0;

  DelayModel model(std::uint64_t seed) const;
};

struct Scenario {
  int schema = kScenarioSchemaVersion;
  std::string name;
  SystemSpec system;
  FadingSpec fading;
  double tau = 1e-3;
  StepSchedule step = StepSchedule::Constant(1.0);
  double residual_tol = 1e-9;
  EngineKind engine = EngineKind::kSync;
  UpdateSpec update;
  DelaySpec delays;
  NoiseSpec noise;
  bool run_iwf = false;
  bool run_swf = false;
  std::int64_t iters = 100;
  std::uint64_t seed = 0;
  // Optional pinned extrema (skips the reference search) and search knobs.
  std::optional<std::pair<double, double>> pinned_extrema;  // (max, min) sum rates
  double extrema_tol = 1e-6;
  int extrema_restarts = 1000;

  void validate() const;

  static Scenario from_json(const nlohmann::json& doc);
  static Scenario from_file(const std::string& path);
  nlohmann::json canonical_json() const;
  /// FNV-1a over the canonical serialized form.
  std::uint64_t hash() const;

  /// Deterministic channel realization drawn from the scenario seed.
  ChannelState channel_at(std::int64_t epoch) const;
  std::vector<int> tx_antennas() const;
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dxl

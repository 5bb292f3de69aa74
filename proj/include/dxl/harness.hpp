// SPDX-License-Identifier: Apache-2.0
//
// Scenario runner: wires the MIMO oracles (exact, additive-noise or
// sampled-feedback), the synchronous or asynchronous engine and the
// water-filling baselines; emits one CSV per run plus a manifest, with
// deterministic byte-for-byte output for a fixed scenario and seed.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dxl/extrema.hpp"
#include "dxl/scenario.hpp"
#include "dxl/waterfilling.hpp"

namespace dxl {

struct RunRow {
  std::int64_t iteration = 0;
  std::int64_t broadcasts = 0;
  double time_ms = 0.0;
  double sum_rate_nats = 0.0;
  double potential = 0.0;
  double efficiency = 0.0;
  std::vector<double> user_rates;
  std::vector<double> user_residuals;
  // Per-epoch references, populated for fading runs and appended after the
  // fixed columns.
  std::optional<double> ref_sum_rate_max;
  std::optional<double> uniform_sum_rate;
};

struct RunRecord {
  std::string name;
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  int users = 0;
  std::vector<RunRow> rows;
  double sum_rate_max = 0.0;
  double sum_rate_min = 0.0;
  bool extrema_converged = true;
  bool extrema_pinned = false;
  int efficiency_overshoots = 0;  // rows whose raw efficiency exceeded 1
  double wall_ms = 0.0;           // not part of the CSV
  TransmitProfile final_profile;
};

/// Execute the scenario without touching the filesystem.
RunRecord run_scenario_in_memory(const Scenario& scenario);

/// Execute and write <name>.csv and <name>.manifest.json into out_dir
/// (atomically, via rename). Returns the record.
RunRecord run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

struct BaselineCurve {
  std::string method;  // "dxl", "iwf" or "swf"
  std::vector<std::int64_t> broadcasts;
  std::vector<double> sum_rates;
  std::vector<double> efficiencies;

  /// First broadcast count reaching the efficiency target, or -1.
  std::int64_t broadcasts_to(double target) const;
};

struct BaselineSummary {
  std::uint64_t scenario_hash = 0;
  double sum_rate_max = 0.0;
  double sum_rate_min = 0.0;
  std::vector<BaselineCurve> curves;

  const BaselineCurve& curve(const std::string& method) const;
};

/// Run DXL and the requested water-filling baselines on the scenario's static
/// channel, aligned on the common gradient-broadcast axis (every receiver
/// broadcast of the whitened statistics counts one).
BaselineSummary compare_baselines(const Scenario& scenario);

/// compare_baselines plus <name>.baselines.csv / .baselines.json output.
BaselineSummary compare_baselines(const Scenario& scenario,
                                  const std::filesystem::path& out_dir);

/// Shortest round-trip decimal formatting (locale-independent).
std::string format_double(double v);

void write_run_csv(const RunRecord& record, const std::filesystem::path& path);
void write_run_manifest(const RunRecord& record, const Scenario& scenario,
                        const std::filesystem::path& path);

}  // namespace dxl

// SPDX-License-Identifier: Apache-2.0

#include "dxl/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dxl/estimation.hpp"
#include "dxl/parallel.hpp"
#include "dxl/rng.hpp"

namespace dxl {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f6973u;
constexpr std::uint64_t kSamplerTag = 0x736d70u;
constexpr std::uint64_t kMeasureTag = 0x6d6561u;
constexpr std::uint64_t kExtremaTag = 0x657874u;
constexpr std::uint64_t kAsyncTag = 0x61736eu;

/// Per-user stochastic gradient feedback, minimization sign. The sync path
/// shares one receiver broadcast per epoch; the async path rebuilds the
/// whitened statistics from each agent's (possibly stale) profile view.
class OracleBank {
 public:
  OracleBank(const Scenario& scenario, int users) : scenario_(scenario) {
    if (scenario_.noise.kind == NoiseKind::kAdditive) {
      rngs_.reserve(users);
      for (int k = 0; k < users; ++k) {
        rngs_.emplace_back(mix_seed(scenario_.seed, kNoiseTag, static_cast<std::uint64_t>(k)));
      }
    }
  }

  /// Receiver side of the epoch: compute the broadcast statistics for the
  /// current channel and profile.
  void begin_epoch(const ChannelState& channel, const TransmitProfile& profile,
                   std::int64_t epoch) {
    const int n = channel.rx_antennas;
    const HermitianMatrix w = aggregate_covariance(channel, profile);
    if (scenario_.noise.kind == NoiseKind::kSampledFeedback) {
      SignalSampler sampler(channel, profile, scenario_.noise.signal_samples,
                            mix_seed(scenario_.seed, kSamplerTag,
                                     static_cast<std::uint64_t>(epoch)));
      const HermitianMatrix w_hat = sample_covariance(sampler.draw());
      broadcast_ = unbiased_precision(w_hat, scenario_.noise.signal_samples, n).mat();
    } else {
      broadcast_ = Eigen::LLT<MatrixXc>(w.mat()).solve(MatrixXc::Identity(n, n));
    }
  }

  /// Transmitter side: user k's gradient estimate against the broadcast.
  HermitianMatrix estimate(const ChannelState& channel, int k, std::int64_t epoch) {
    switch (scenario_.noise.kind) {
      case NoiseKind::kNone: {
        return HermitianMatrix(-channel.powers[k] * channel.channels[k].adjoint() * broadcast_ *
                               channel.channels[k]);
      }
      case NoiseKind::kAdditive: {
        const HermitianMatrix v{channel.powers[k] * channel.channels[k].adjoint() * broadcast_ *
                                channel.channels[k]};
        return -additive_noise_oracle(v, scenario_.noise.eta, rngs_[k]);
      }
      case NoiseKind::kSampledFeedback: {
        ChannelMeasurementModel model(
            channel.channels[k], scenario_.noise.eta,
            mix_seed(scenario_.seed, kMeasureTag, static_cast<std::uint64_t>(epoch),
                     static_cast<std::uint64_t>(k)));
        const HermitianMatrix g = unbiased_gradient_alldistinct(
            model.measure_batch(scenario_.noise.channel_samples),
            HermitianMatrix(broadcast_));
        return g * (-channel.powers[k]);
      }
    }
    throw std::logic_error("OracleBank: unknown noise kind");
  }

  /// Self-contained estimate for the async engine: the whitened statistics
  /// are rebuilt from the agent's own (delayed) view of the joint profile.
  HermitianMatrix estimate_from_view(const ChannelState& channel,
                                     const TransmitProfile& view, int k, std::int64_t epoch,
                                     std::mt19937_64& rng) {
    switch (scenario_.noise.kind) {
      case NoiseKind::kNone:
        return -rate_gradient(channel, view, k);
      case NoiseKind::kAdditive:
        return -additive_noise_oracle(rate_gradient(channel, view, k), scenario_.noise.eta, rng);
      case NoiseKind::kSampledFeedback: {
        SignalSampler sampler(channel, view, scenario_.noise.signal_samples, rng());
        const HermitianMatrix p_hat = unbiased_precision(
            sample_covariance(sampler.draw()), scenario_.noise.signal_samples,
            channel.rx_antennas);
        ChannelMeasurementModel model(channel.channels[k], scenario_.noise.eta, rng());
        const HermitianMatrix g = unbiased_gradient_alldistinct(
            model.measure_batch(scenario_.noise.channel_samples), p_hat);
        return g * (-channel.powers[k]);
      }
    }
    throw std::logic_error("OracleBank: unknown noise kind");
  }

 private:
  const Scenario& scenario_;
  MatrixXc broadcast_;  // W^{-1} or its unbiased estimate
  std::vector<std::mt19937_64> rngs_;
};

struct EpochReferences {
  double sum_rate_max = 0.0;
  double sum_rate_min = 0.0;
  bool converged = true;
};

/// Reference extrema bookkeeping: fixed for static channels (or pinned by the
/// scenario), recomputed with warm starts per epoch under fading.
class ReferenceTracker {
 public:
  ReferenceTracker(const Scenario& scenario, const ChannelState& initial_channel)
      : scenario_(scenario) {
    if (scenario_.pinned_extrema) {
      fixed_ = EpochReferences{scenario_.pinned_extrema->first, scenario_.pinned_extrema->second,
                               true};
      pinned_ = true;
      return;
    }
    ExtremaOptions options;
    options.seed = mix_seed(scenario_.seed, kExtremaTag);
    options.restarts = scenario_.extrema_restarts;
    Extrema full = reference_extrema(initial_channel, scenario_.extrema_tol, options);
    warm_max_ = full.argmax;
    warm_min_ = full.argmin_vectors;
    fixed_ = EpochReferences{full.sum_rate_max, full.sum_rate_min,
                             full.max_converged && full.min_converged};
  }

  bool pinned() const { return pinned_; }

  EpochReferences at_epoch(const ChannelState& channel, std::int64_t epoch) {
    if (pinned_ || scenario_.fading.kind == FadingKind::kStatic) {
      return fixed_;
    }
    if (epoch == 0) {
      return fixed_;
    }
    // Fading: re-solve with warm starts and a reduced search.
    ExtremaOptions options;
    options.seed = mix_seed(scenario_.seed, kExtremaTag, static_cast<std::uint64_t>(epoch));
    options.starts = 2;
    options.restarts = 32;
    options.polish_candidates = 4;
    options.warm_max = warm_max_;
    options.warm_min = warm_min_;
    Extrema ext = reference_extrema(channel, scenario_.extrema_tol, options);
    warm_max_ = ext.argmax;
    warm_min_ = ext.argmin_vectors;
    return EpochReferences{ext.sum_rate_max, ext.sum_rate_min,
                           ext.max_converged && ext.min_converged};
  }

 private:
  const Scenario& scenario_;
  EpochReferences fixed_;
  bool pinned_ = false;
  std::optional<TransmitProfile> warm_max_;
  std::optional<std::vector<Eigen::VectorXcd>> warm_min_;
};

std::vector<double> all_user_rates(const ChannelState& channel, const TransmitProfile& profile) {
  const int users = channel.users();
  std::vector<double> rates(users, 0.0);
  const double total = sum_rate(channel, profile);
  par::parallel_for(users, [&](std::int64_t k) {
    rates[k] = total - logdet(mui_matrix(channel, profile, static_cast<int>(k)));
  });
  return rates;
}

struct EngineOutput {
  std::vector<RunRow> rows;
  TransmitProfile final_profile;
  int overshoots = 0;
  double sum_rate_max = 0.0;
  double sum_rate_min = 0.0;
  bool extrema_converged = true;
  bool extrema_pinned = false;
};

RunRow make_row(const Scenario& scenario, const ChannelState& channel,
                const TransmitProfile& profile, const std::vector<HermitianMatrix>& grad_means,
                const std::vector<HermitianMatrix>& scores, std::int64_t epoch,
                const EpochReferences& refs, int* overshoots) {
  RunRow row;
  row.iteration = epoch;
  row.broadcasts = epoch;
  row.time_ms = static_cast<double>(epoch) * scenario.fading.period_s * 1e3;
  row.sum_rate_nats = sum_rate(channel, profile);
  row.potential = -row.sum_rate_nats;
  row.efficiency = efficiency(row.sum_rate_nats, refs.sum_rate_max, refs.sum_rate_min);
  const double raw =
      (row.sum_rate_nats - refs.sum_rate_min) / (refs.sum_rate_max - refs.sum_rate_min);
  if (raw > 1.0) {
    ++*overshoots;
  }
  row.user_rates = all_user_rates(channel, profile);
  row.user_residuals.resize(channel.users());
  for (int k = 0; k < channel.users(); ++k) {
    row.user_residuals[k] = score_residual(grad_means[k], scores[k], scenario.tau);
  }
  if (scenario.fading.kind != FadingKind::kStatic) {
    row.ref_sum_rate_max = refs.sum_rate_max;
    row.uniform_sum_rate = sum_rate(channel, TransmitProfile::Uniform(channel));
  }
  return row;
}

EngineOutput run_sync_engine(const Scenario& scenario) {
  const ChannelState channel0 = scenario.channel_at(0);
  channel0.validate();
  const int users = channel0.users();
  const bool static_channel = scenario.fading.kind == FadingKind::kStatic;
  const FadingProcess fading = scenario.fading.process(scenario.seed);
  const std::vector<int> tx = scenario.tx_antennas();

  OracleBank bank(scenario, users);
  ReferenceTracker refs(scenario, channel0);

  TransmitProfile profile = TransmitProfile::Uniform(channel0);
  std::vector<HermitianMatrix> scores;
  std::vector<HermitianMatrix> grad_means;
  for (int k = 0; k < users; ++k) {
    scores.push_back(HermitianMatrix::Zero(tx[k]));
    grad_means.push_back(HermitianMatrix::Zero(tx[k]));
  }

  EngineOutput out;
  out.extrema_pinned = refs.pinned();

  EpochReferences r0 = refs.at_epoch(channel0, 0);
  out.sum_rate_max = r0.sum_rate_max;
  out.sum_rate_min = r0.sum_rate_min;
  out.extrema_converged = r0.converged;
  out.rows.push_back(
      make_row(scenario, channel0, profile, grad_means, scores, 0, r0, &out.overshoots));

  ChannelState channel = channel0;
  for (std::int64_t n = 1; n <= scenario.iters; ++n) {
    if (!static_channel) {
      channel.channels = fading.sample(channel.rx_antennas, tx, n - 1);
    }
    bank.begin_epoch(channel, profile, n);
    const double gamma = scenario.step.gamma(n);

    // Per-user updates write disjoint slots; additive-noise draws come from
    // per-user streams, so the loop parallelizes deterministically.
    std::vector<HermitianMatrix> grads(users, HermitianMatrix::Zero(1));
    for (int k = 0; k < users; ++k) {
      grads[k] = bank.estimate(channel, k, n);
    }
    par::parallel_for(users, [&](std::int64_t k) {
      scores[k] = trusted_hermitian(scores[k].mat() -
                                    gamma * (grads[k].mat() + scenario.tau * scores[k].mat()));
      profile.users[k] = exp_project(scores[k]);
      grad_means[k] = trusted_hermitian(grad_means[k].mat() +
                                        (grads[k].mat() - grad_means[k].mat()) /
                                            static_cast<double>(n));
    });

    const EpochReferences r = refs.at_epoch(channel, n);
    out.rows.push_back(
        make_row(scenario, channel, profile, grad_means, scores, n, r, &out.overshoots));
  }
  out.final_profile = profile;
  return out;
}

EngineOutput run_async_engine(const Scenario& scenario) {
  const ChannelState channel0 = scenario.channel_at(0);
  channel0.validate();
  const int users = channel0.users();
  const bool static_channel = scenario.fading.kind == FadingKind::kStatic;
  const FadingProcess fading = scenario.fading.process(scenario.seed);
  const std::vector<int> tx = scenario.tx_antennas();

  OracleBank bank(scenario, users);
  ReferenceTracker refs(scenario, channel0);

  EngineOutput out;
  out.extrema_pinned = refs.pinned();
  EpochReferences r0 = refs.at_epoch(channel0, 0);
  out.sum_rate_max = r0.sum_rate_max;
  out.sum_rate_min = r0.sum_rate_min;
  out.extrema_converged = r0.converged;

  std::vector<HermitianMatrix> grad_means;
  std::vector<std::int64_t> grad_counts(users, 0);
  for (int k = 0; k < users; ++k) {
    grad_means.push_back(HermitianMatrix::Zero(tx[k]));
  }

  // Channel realization per epoch, shared by oracle and row logging.
  ChannelState channel = channel0;

  std::vector<MultiAgentOracle> oracles;
  oracles.reserve(users);
  for (int k = 0; k < users; ++k) {
    // Informational bound from the initial realization: P ||H||_F^2 (1 + eta).
    const double h_norm = channel0.channels[k].norm();
    const double bound = channel0.powers[k] * h_norm * h_norm * (1.0 + scenario.noise.eta);
    oracles.push_back(MultiAgentOracle(
        tx[k], bound,
        [&bank, &channel, k](const std::vector<SpectraPoint>& view, std::int64_t epoch,
                             std::mt19937_64& rng) {
          return bank.estimate_from_view(channel, TransmitProfile{view}, k, epoch, rng);
        }));
  }

  {
    TransmitProfile uniform = TransmitProfile::Uniform(channel0);
    std::vector<HermitianMatrix> zero_scores;
    for (int k = 0; k < users; ++k) zero_scores.push_back(HermitianMatrix::Zero(tx[k]));
    out.rows.push_back(make_row(scenario, channel0, uniform, grad_means, zero_scores, 0, r0,
                                &out.overshoots));
  }

  AsyncConfig config;
  config.tau = scenario.tau;
  config.schedule = scenario.step;
  config.horizon = scenario.iters;
  config.seed = mix_seed(scenario.seed, kAsyncTag);
  config.observer = [&](const MultiAgentState& state, const std::vector<int>&,
                        const std::vector<std::pair<int, HermitianMatrix>>& grads) {
    for (const auto& [k, grad] : grads) {
      const double count = static_cast<double>(++grad_counts[k]);
      grad_means[k] =
          trusted_hermitian(grad_means[k].mat() + (grad.mat() - grad_means[k].mat()) / count);
    }
    TransmitProfile profile{state.current_profile()};
    std::vector<HermitianMatrix> scores;
    scores.reserve(users);
    for (const AgentState& a : state.agents) scores.push_back(a.score);
    const EpochReferences r = refs.at_epoch(channel, state.epoch);
    out.rows.push_back(make_row(scenario, channel, profile, grad_means, scores, state.epoch, r,
                                &out.overshoots));
    // Advance the channel for the next epoch after logging this one.
    if (!static_channel) {
      channel.channels = fading.sample(channel.rx_antennas, tx, state.epoch);
    }
  };

  const UpdateSchedule schedule = scenario.update.schedule(users, scenario.seed);
  const DelayModel delays = scenario.delays.model(scenario.seed);
  AsyncResult result = run_async(oracles, schedule, delays, config);
  out.final_profile = TransmitProfile{result.final_state().current_profile()};
  return out;
}

}  // namespace

RunRecord run_scenario_in_memory(const Scenario& scenario) {
  scenario.validate();
  const auto start = std::chrono::steady_clock::now();
  EngineOutput out = scenario.engine == EngineKind::kSync ? run_sync_engine(scenario)
                                                          : run_async_engine(scenario);
  RunRecord record;
  record.name = scenario.name;
  record.scenario_hash = scenario.hash();
  record.seed = scenario.seed;
  record.users = scenario.system.users;
  record.rows = std::move(out.rows);
  record.sum_rate_max = out.sum_rate_max;
  record.sum_rate_min = out.sum_rate_min;
  record.extrema_converged = out.extrema_converged;
  record.extrema_pinned = out.extrema_pinned;
  record.efficiency_overshoots = out.overshoots;
  record.final_profile = out.final_profile;
  record.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             start)
                       .count();
  return record;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) {
      throw std::runtime_error("cannot open output file " + tmp.string());
    }
    o << contents;
  }
  std::filesystem::rename(tmp, path);
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void write_run_csv(const RunRecord& record, const std::filesystem::path& path) {
  std::string csv;
  csv.reserve(record.rows.size() * 128);
  csv += "iteration,broadcasts,time_ms,sum_rate_nats,potential,efficiency";
  for (int k = 1; k <= record.users; ++k) {
    csv += ",rate_user_" + std::to_string(k);
  }
  for (int k = 1; k <= record.users; ++k) {
    csv += ",residual_user_" + std::to_string(k);
  }
  const bool fading_columns = !record.rows.empty() && record.rows.front().ref_sum_rate_max;
  if (fading_columns) {
    csv += ",ref_sum_rate_max,uniform_sum_rate";
  }
  csv += "\n";
  for (const RunRow& row : record.rows) {
    csv += std::to_string(row.iteration);
    csv += ',';
    csv += std::to_string(row.broadcasts);
    csv += ',';
    csv += format_double(row.time_ms);
    csv += ',';
    csv += format_double(row.sum_rate_nats);
    csv += ',';
    csv += format_double(row.potential);
    csv += ',';
    csv += format_double(row.efficiency);
    for (double r : row.user_rates) {
      csv += ',';
      csv += format_double(r);
    }
    for (double r : row.user_residuals) {
      csv += ',';
      csv += format_double(r);
    }
    if (fading_columns) {
      csv += ',';
      csv += format_double(row.ref_sum_rate_max.value_or(0.0));
      csv += ',';
      csv += format_double(row.uniform_sum_rate.value_or(0.0));
    }
    csv += '\n';
  }
  atomic_write(path, csv);
}

void write_run_manifest(const RunRecord& record, const Scenario& scenario,
                        const std::filesystem::path& path) {
  json doc{{"name", record.name},
           {"scenario_hash", hash_hex(record.scenario_hash)},
           {"seed", record.seed},
           {"rows", record.rows.size()},
           {"extrema", json{{"sum_rate_max", record.sum_rate_max},
                            {"sum_rate_min", record.sum_rate_min},
                            {"converged", record.extrema_converged},
                            {"pinned", record.extrema_pinned}}},
           {"efficiency_overshoots", record.efficiency_overshoots},
           {"wall_ms", record.wall_ms},
           {"scenario", scenario.canonical_json()}};
  atomic_write(path, doc.dump(2) + "\n");
}

RunRecord run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  RunRecord record = run_scenario_in_memory(scenario);
  std::filesystem::create_directories(out_dir);
  write_run_csv(record, out_dir / (scenario.name + ".csv"));
  write_run_manifest(record, scenario, out_dir / (scenario.name + ".manifest.json"));
  return record;
}

std::int64_t BaselineCurve::broadcasts_to(double target) const {
  for (std::size_t i = 0; i < broadcasts.size(); ++i) {
    if (efficiencies[i] >= target) {
      return broadcasts[i];
    }
  }
  return -1;
}

const BaselineCurve& BaselineSummary::curve(const std::string& method) const {
  for (const BaselineCurve& c : curves) {
    if (c.method == method) {
      return c;
    }
  }
  throw std::out_of_range("no baseline curve for method " + method);
}

namespace {

/// Best response against a noisy effective-gain observation; a degenerate
/// observation (no positive gain direction) keeps the previous covariance.
SpectraPoint noisy_best_response(const ChannelState& channel, const TransmitProfile& profile,
                                 int k, double eta, std::mt19937_64* rng) {
  HermitianMatrix gain = effective_gain(channel, profile, k);
  if (eta > 0.0 && rng != nullptr) {
    gain = additive_noise_oracle(gain, eta, *rng);
  }
  try {
    return waterfill_gain_matrix(gain, channel.powers[k]);
  } catch (const std::domain_error&) {
    return profile.users[k];
  }
}

}  // namespace

BaselineSummary compare_baselines(const Scenario& scenario) {
  scenario.validate();
  if (scenario.fading.kind != FadingKind::kStatic) {
    throw config_error("compare_baselines: baselines require a static channel");
  }
  if (scenario.noise.kind == NoiseKind::kSampledFeedback) {
    throw config_error("compare_baselines: baselines support additive noise only");
  }
  const ChannelState channel = scenario.channel_at(0);
  const double eta = scenario.noise.kind == NoiseKind::kAdditive ? scenario.noise.eta : 0.0;

  BaselineSummary summary;
  summary.scenario_hash = scenario.hash();

  // DXL curve straight from the synchronous engine.
  Scenario dxl_scenario = scenario;
  dxl_scenario.engine = EngineKind::kSync;
  dxl_scenario.run_iwf = false;
  dxl_scenario.run_swf = false;
  RunRecord dxl = run_scenario_in_memory(dxl_scenario);
  summary.sum_rate_max = dxl.sum_rate_max;
  summary.sum_rate_min = dxl.sum_rate_min;

  BaselineCurve dxl_curve;
  dxl_curve.method = "dxl";
  for (const RunRow& row : dxl.rows) {
    dxl_curve.broadcasts.push_back(row.broadcasts);
    dxl_curve.sum_rates.push_back(row.sum_rate_nats);
    dxl_curve.efficiencies.push_back(row.efficiency);
  }
  summary.curves.push_back(std::move(dxl_curve));

  const auto eff = [&](double rate) {
    return efficiency(rate, summary.sum_rate_max, summary.sum_rate_min);
  };

  if (scenario.run_iwf) {
    // Round-robin best responses; every individual update consumes one
    // receiver broadcast.
    BaselineCurve curve;
    curve.method = "iwf";
    TransmitProfile profile = TransmitProfile::Uniform(channel);
    std::vector<std::mt19937_64> rngs;
    for (int k = 0; k < channel.users(); ++k) {
      rngs.emplace_back(mix_seed(scenario.seed, kNoiseTag, static_cast<std::uint64_t>(k)));
    }
    curve.broadcasts.push_back(0);
    curve.sum_rates.push_back(sum_rate(channel, profile));
    curve.efficiencies.push_back(eff(curve.sum_rates.back()));
    std::int64_t broadcasts = 0;
    while (broadcasts < scenario.iters) {
      for (int k = 0; k < channel.users() && broadcasts < scenario.iters; ++k) {
        profile.users[k] =
            noisy_best_response(channel, profile, k, eta, eta > 0 ? &rngs[k] : nullptr);
        ++broadcasts;
        curve.broadcasts.push_back(broadcasts);
        curve.sum_rates.push_back(sum_rate(channel, profile));
        curve.efficiencies.push_back(eff(curve.sum_rates.back()));
      }
    }
    summary.curves.push_back(std::move(curve));
  }

  if (scenario.run_swf) {
    // Simultaneous best responses; one broadcast per sweep.
    BaselineCurve curve;
    curve.method = "swf";
    TransmitProfile profile = TransmitProfile::Uniform(channel);
    std::vector<std::mt19937_64> rngs;
    for (int k = 0; k < channel.users(); ++k) {
      rngs.emplace_back(mix_seed(scenario.seed, kNoiseTag, static_cast<std::uint64_t>(k)));
    }
    curve.broadcasts.push_back(0);
    curve.sum_rates.push_back(sum_rate(channel, profile));
    curve.efficiencies.push_back(eff(curve.sum_rates.back()));
    for (std::int64_t sweep = 1; sweep <= scenario.iters; ++sweep) {
      TransmitProfile previous = profile;
      for (int k = 0; k < channel.users(); ++k) {
        profile.users[k] =
            noisy_best_response(channel, previous, k, eta, eta > 0 ? &rngs[k] : nullptr);
      }
      curve.broadcasts.push_back(sweep);
      curve.sum_rates.push_back(sum_rate(channel, profile));
      curve.efficiencies.push_back(eff(curve.sum_rates.back()));
    }
    summary.curves.push_back(std::move(curve));
  }

  return summary;
}

BaselineSummary compare_baselines(const Scenario& scenario,
                                  const std::filesystem::path& out_dir) {
  BaselineSummary summary = compare_baselines(scenario);
  std::filesystem::create_directories(out_dir);

  std::string csv = "method,broadcasts,sum_rate_nats,efficiency\n";
  for (const BaselineCurve& curve : summary.curves) {
    for (std::size_t i = 0; i < curve.broadcasts.size(); ++i) {
      csv += curve.method;
      csv += ',';
      csv += std::to_string(curve.broadcasts[i]);
      csv += ',';
      csv += format_double(curve.sum_rates[i]);
      csv += ',';
      csv += format_double(curve.efficiencies[i]);
      csv += '\n';
    }
  }
  atomic_write(out_dir / (scenario.name + ".baselines.csv"), csv);

  json methods = json::array();
  for (const BaselineCurve& curve : summary.curves) {
    methods.push_back(json{{"method", curve.method},
                           {"broadcasts_to_0.99", curve.broadcasts_to(0.99)},
                           {"final_efficiency", curve.efficiencies.back()}});
  }
  json doc{{"scenario_hash", hash_hex(summary.scenario_hash)},
           {"sum_rate_max", summary.sum_rate_max},
           {"sum_rate_min", summary.sum_rate_min},
           {"methods", methods}};
  atomic_write(out_dir / (scenario.name + ".baselines.json"), doc.dump(2) + "\n");
  return summary;
}

}  // namespace dxl

// SPDX-License-Identifier: Apache-2.0

#include "dxl/scenario.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "dxl/rng.hpp"

namespace dxl {

using nlohmann::json;

std::vector<int> SystemSpec::tx_antennas(std::uint64_t seed) const {
  std::vector<int> tx(users);
  if (tx_list) {
    return *tx_list;
  }
  if (tx_fixed) {
    std::fill(tx.begin(), tx.end(), *tx_fixed);
    return tx;
  }
  const auto [lo, hi] = *tx_range;
  std::mt19937_64 rng(mix_seed(seed, 0x616e74u));
  std::uniform_int_distribution<int> dist(lo, hi);
  for (int& m : tx) {
    m = dist(rng);
  }
  return tx;
}

std::vector<double> SystemSpec::powers() const {
  if (power_list) {
    return *power_list;
  }
  return std::vector<double>(users, power);
}

FadingProcess FadingSpec::process(std::uint64_t seed) const {
  switch (kind) {
    case FadingKind::kStatic:
      return FadingProcess::Static(mix_seed(seed, 0x666164u));
    case FadingKind::kIidGaussian:
      return FadingProcess::IidGaussian(mix_seed(seed, 0x666164u));
    case FadingKind::kJakes:
      return FadingProcess::Jakes(carrier_hz, velocity_mps, period_s, oscillators,
                                  mix_seed(seed, 0x666164u));
  }
  throw std::logic_error("FadingSpec: unknown kind");
}

UpdateSchedule UpdateSpec::schedule(int agents, std::uint64_t seed) const {
  switch (kind) {
    case UpdateKind::kRoundRobin:
      return UpdateSchedule::RoundRobin(agents);
    case UpdateKind::kAllAtOnce:
      return UpdateSchedule::AllAtOnce(agents);
    case UpdateKind::kPoisson: {
      std::vector<double> r = rates;
      if (r.empty()) {
        r.assign(agents, 1.0);
      }
      return UpdateSchedule::Poisson(r, mix_seed(seed, 0x757064u));
    }
  }
  throw std::logic_error("UpdateSpec: unknown kind");
}

DelayModel DelaySpec::model(std::uint64_t seed) const {
  switch (kind) {
    case DelayKind::kZero:
      return DelayModel::Zero();
    case DelayKind::kFixed:
      return DelayModel::Fixed(max_delay);
    case DelayKind::kUniformRandom:
      return DelayModel::UniformRandom(max_delay, mix_seed(seed, 0x646c79u));
  }
  throw std::logic_error("DelaySpec: unknown kind");
}

void Scenario::validate() const {
  if (schema != kScenarioSchemaVersion) {
    throw config_error("scenario: unsupported schema version " + std::to_string(schema));
  }
  if (name.empty()) {
    throw config_error("scenario: name required");
  }
  if (system.users < 1 || system.rx_antennas < 1) {
    throw config_error("scenario: users and rx_antennas must be >= 1");
  }
  if (system.tx_list && static_cast<int>(system.tx_list->size()) != system.users) {
    throw config_error("scenario: tx_antennas list length must equal users");
  }
  if (system.power_list && static_cast<int>(system.power_list->size()) != system.users) {
    throw config_error("scenario: power list length must equal users");
  }
  for (double p : system.powers()) {
    if (p <= 0.0) {
      throw config_error("scenario: powers must be > 0");
    }
  }
  if (tau <= 0.0) {
    throw config_error("scenario: tau must be > 0");
  }
  try {
    step.validate();
    if (step.kind == StepKind::kConstant && step.gamma0 >= 1.0 / tau) {
      throw std::invalid_argument("constant step requires gamma0 < 1/tau");
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("scenario: ") + e.what());
  }
  if (iters < 1) {
    throw config_error("scenario: iters must be >= 1");
  }
  if (noise.kind == NoiseKind::kAdditive && noise.eta < 0.0) {
    throw config_error("scenario: noise eta must be >= 0");
  }
  if (noise.kind == NoiseKind::kSampledFeedback) {
    if (noise.signal_samples <= system.rx_antennas + 1) {
      throw config_error("scenario: sampled feedback needs signal_samples > rx_antennas + 1");
    }
    if (noise.channel_samples < 2) {
      throw config_error("scenario: sampled feedback needs channel_samples >= 2");
    }
  }
  if (fading.kind == FadingKind::kJakes &&
      (fading.carrier_hz <= 0 || fading.period_s <= 0 || fading.oscillators < 1)) {
    throw config_error("scenario: invalid jakes parameters");
  }
  if (delays.max_delay < 0) {
    throw config_error("scenario: max_delay must be >= 0");
  }
  if (engine == EngineKind::kAsync && update.kind == UpdateKind::kPoisson &&
      !update.rates.empty() && static_cast<int>(update.rates.size()) != system.users) {
    throw config_error("scenario: poisson rates length must equal users");
  }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw config_error("scenario: unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
T require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) {
    throw config_error("scenario: missing key '" + key + "' in " + where);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error("scenario: bad value for '" + key + "' in " + where + ": " + e.what());
  }
}

template <class T>
T optional_or(const json& obj, const std::string& key, const T& fallback,
              const std::string& where) {
  if (!obj.contains(key)) {
    return fallback;
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error("scenario: bad value for '" + key + "' in " + where + ": " + e.what());
  }
}

StepSchedule parse_schedule(const json& obj) {
  reject_unknown_keys(obj, {"kind", "gamma0", "exponent"}, "solver.schedule");
  const std::string kind = require<std::string>(obj, "kind", "solver.schedule");
  const double gamma0 = require<double>(obj, "gamma0", "solver.schedule");
  if (kind == "constant") return StepSchedule::Constant(gamma0);
  if (kind == "harmonic") return StepSchedule::Harmonic(gamma0);
  if (kind == "power") {
    return StepSchedule::Power(gamma0, require<double>(obj, "exponent", "solver.schedule"));
  }
  throw config_error("scenario: unknown schedule kind '" + kind + "'");
}

}  // namespace

Scenario Scenario::from_json(const json& doc) {
  if (!doc.is_object()) {
    throw config_error("scenario: document must be a JSON object");
  }
  reject_unknown_keys(doc,
                      {"schema", "name", "system", "fading", "solver", "engine",
                       "update_schedule", "delays", "noise", "baselines", "extrema", "iters",
                       "seed"},
                      "top level");

  Scenario sc;
  sc.schema = require<int>(doc, "schema", "top level");
  sc.name = require<std::string>(doc, "name", "top level");

  const json& sys = doc.contains("system") ? doc.at("system") : json::object();
  reject_unknown_keys(sys, {"users", "rx_antennas", "tx_antennas", "power"}, "system");
  sc.system.users = require<int>(sys, "users", "system");
  sc.system.rx_antennas = require<int>(sys, "rx_antennas", "system");
  if (!sys.contains("tx_antennas")) {
    throw config_error("scenario: missing key 'tx_antennas' in system");
  }
  const json& tx = sys.at("tx_antennas");
  if (tx.is_number_integer()) {
    sc.system.tx_fixed = tx.get<int>();
  } else if (tx.is_array()) {
    sc.system.tx_list = tx.get<std::vector<int>>();
  } else if (tx.is_object()) {
    reject_unknown_keys(tx, {"min", "max"}, "system.tx_antennas");
    sc.system.tx_range = {require<int>(tx, "min", "system.tx_antennas"),
                          require<int>(tx, "max", "system.tx_antennas")};
  } else {
    throw config_error("scenario: tx_antennas must be an integer, list or {min,max}");
  }
  if (sys.contains("power")) {
    const json& p = sys.at("power");
    if (p.is_array()) {
      sc.system.power_list = p.get<std::vector<double>>();
    } else {
      sc.system.power = p.get<double>();
    }
  }

  if (doc.contains("fading")) {
    const json& fad = doc.at("fading");
    reject_unknown_keys(fad, {"kind", "carrier_hz", "velocity_mps", "period_s", "oscillators"},
                        "fading");
    const std::string kind = require<std::string>(fad, "kind", "fading");
    if (kind == "static") {
      sc.fading.kind = FadingKind::kStatic;
    } else if (kind == "iid-gaussian") {
      sc.fading.kind = FadingKind::kIidGaussian;
    } else if (kind == "jakes") {
      sc.fading.kind = FadingKind::kJakes;
      sc.fading.carrier_hz = require<double>(fad, "carrier_hz", "fading");
      sc.fading.velocity_mps = require<double>(fad, "velocity_mps", "fading");
      sc.fading.period_s = require<double>(fad, "period_s", "fading");
      sc.fading.oscillators = optional_or<int>(fad, "oscillators", 16, "fading");
    } else {
      throw config_error("scenario: unknown fading kind '" + kind + "'");
    }
    sc.fading.period_s = optional_or<double>(fad, "period_s", sc.fading.period_s, "fading");
  }

  const json& solver = doc.contains("solver") ? doc.at("solver") : json::object();
  reject_unknown_keys(solver, {"tau", "schedule", "residual_tol"}, "solver");
  sc.tau = require<double>(solver, "tau", "solver");
  if (!solver.contains("schedule")) {
    throw config_error("scenario: missing key 'schedule' in solver");
  }
  sc.step = parse_schedule(solver.at("schedule"));
  sc.residual_tol = optional_or<double>(solver, "residual_tol", 1e-9, "solver");

  const std::string engine = optional_or<std::string>(doc, "engine", "sync", "top level");
  if (engine == "sync") {
    sc.engine = EngineKind::kSync;
  } else if (engine == "async") {
    sc.engine = EngineKind::kAsync;
  } else {
    throw config_error("scenario: unknown engine '" + engine + "'");
  }

  if (doc.contains("update_schedule")) {
    const json& upd = doc.at("update_schedule");
    reject_unknown_keys(upd, {"kind", "rates"}, "update_schedule");
    const std::string kind = require<std::string>(upd, "kind", "update_schedule");
    if (kind == "round-robin") {
      sc.update.kind = UpdateKind::kRoundRobin;
    } else if (kind == "all-at-once") {
      sc.update.kind = UpdateKind::kAllAtOnce;
    } else if (kind == "poisson") {
      sc.update.kind = UpdateKind::kPoisson;
      sc.update.rates = optional_or<std::vector<double>>(upd, "rates", {}, "update_schedule");
    } else {
      throw config_error("scenario: unknown update_schedule kind '" + kind + "'");
    }
  }

  if (doc.contains("delays")) {
    const json& del = doc.at("delays");
    reject_unknown_keys(del, {"kind", "max_delay"}, "delays");
    const std::string kind = require<std::string>(del, "kind", "delays");
    if (kind == "zero") {
      sc.delays.kind = DelayKind::kZero;
    } else if (kind == "fixed") {
      sc.delays.kind = DelayKind::kFixed;
      sc.delays.max_delay = require<int>(del, "max_delay", "delays");
    } else if (kind == "uniform-random") {
      sc.delays.kind = DelayKind::kUniformRandom;
      sc.delays.max_delay = require<int>(del, "max_delay", "delays");
    } else {
      throw config_error("scenario: unknown delays kind '" + kind + "'");
    }
  }

  if (doc.contains("noise")) {
    const json& noi = doc.at("noise");
    reject_unknown_keys(noi, {"kind", "eta", "signal_samples", "channel_samples"}, "noise");
    const std::string kind = require<std::string>(noi, "kind", "noise");
    if (kind == "none") {
      sc.noise.kind = NoiseKind::kNone;
    } else if (kind == "additive") {
      sc.noise.kind = NoiseKind::kAdditive;
      sc.noise.eta = require<double>(noi, "eta", "noise");
    } else if (kind == "sampled-feedback") {
      sc.noise.kind = NoiseKind::kSampledFeedback;
      sc.noise.signal_samples = require<int>(noi, "signal_samples", "noise");
      sc.noise.channel_samples = require<int>(noi, "channel_samples", "noise");
      sc.noise.eta = optional_or<double>(noi, "eta", 0.0, "noise");
    } else {
      throw config_error("scenario: unknown noise kind '" + kind + "'");
    }
  }

  if (doc.contains("baselines")) {
    for (const auto& b : doc.at("baselines")) {
      const std::string name = b.get<std::string>();
      if (name == "iwf") {
        sc.run_iwf = true;
      } else if (name == "swf") {
        sc.run_swf = true;
      } else {
        throw config_error("scenario: unknown baseline '" + name + "'");
      }
    }
  }

  if (doc.contains("extrema")) {
    const json& ext = doc.at("extrema");
    reject_unknown_keys(ext, {"sum_rate_max", "sum_rate_min", "tol", "restarts"}, "extrema");
    if (ext.contains("sum_rate_max") != ext.contains("sum_rate_min")) {
      throw config_error("scenario: pinned extrema need both sum_rate_max and sum_rate_min");
    }
    if (ext.contains("sum_rate_max")) {
      sc.pinned_extrema = {require<double>(ext, "sum_rate_max", "extrema"),
                           require<double>(ext, "sum_rate_min", "extrema")};
    }
    sc.extrema_tol = optional_or<double>(ext, "tol", sc.extrema_tol, "extrema");
    sc.extrema_restarts = optional_or<int>(ext, "restarts", sc.extrema_restarts, "extrema");
  }

  sc.iters = require<std::int64_t>(doc, "iters", "top level");
  sc.seed = require<std::uint64_t>(doc, "seed", "top level");
  sc.validate();
  return sc;
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("scenario: cannot open config file " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw config_error("scenario: JSON parse failure in " + path + ": " + e.what());
  }
  return from_json(doc);
}

json Scenario::canonical_json() const {
  json sys{{"users", system.users}, {"rx_antennas", system.rx_antennas}};
  if (system.tx_fixed) {
    sys["tx_antennas"] = *system.tx_fixed;
  } else if (system.tx_list) {
    sys["tx_antennas"] = *system.tx_list;
  } else {
    sys["tx_antennas"] = json{{"min", system.tx_range->first}, {"max", system.tx_range->second}};
  }
  if (system.power_list) {
    sys["power"] = *system.power_list;
  } else {
    sys["power"] = system.power;
  }

  json fad{{"kind", fading.kind == FadingKind::kStatic        ? "static"
                    : fading.kind == FadingKind::kIidGaussian ? "iid-gaussian"
                                                              : "jakes"}};
  if (fading.kind == FadingKind::kJakes) {
    fad["carrier_hz"] = fading.carrier_hz;
    fad["velocity_mps"] = fading.velocity_mps;
    fad["period_s"] = fading.period_s;
    fad["oscillators"] = fading.oscillators;
  }

  json sched{{"gamma0", step.gamma0}};
  switch (step.kind) {
    case StepKind::kConstant:
      sched["kind"] = "constant";
      break;
    case StepKind::kHarmonic:
      sched["kind"] = "harmonic";
      break;
    case StepKind::kPower:
      sched["kind"] = "power";
      sched["exponent"] = step.exponent;
      break;
  }

  json noi;
  switch (noise.kind) {
    case NoiseKind::kNone:
      noi = json{{"kind", "none"}};
      break;
    case NoiseKind::kAdditive:
      noi = json{{"kind", "additive"}, {"eta", noise.eta}};
      break;
    case NoiseKind::kSampledFeedback:
      noi = json{{"kind", "sampled-feedback"},
                 {"signal_samples", noise.signal_samples},
                 {"channel_samples", noise.channel_samples},
                 {"eta", noise.eta}};
      break;
  }

  json upd{{"kind", update.kind == UpdateKind::kRoundRobin  ? "round-robin"
                    : update.kind == UpdateKind::kAllAtOnce ? "all-at-once"
                                                            : "poisson"}};
  if (update.kind == UpdateKind::kPoisson && !update.rates.empty()) {
    upd["rates"] = update.rates;
  }

  json del{{"kind", delays.kind == DelayKind::kZero    ? "zero"
                    : delays.kind == DelayKind::kFixed ? "fixed"
                                                       : "uniform-random"}};
  if (delays.kind != DelayKind::kZero) {
    del["max_delay"] = delays.max_delay;
  }

  std::vector<std::string> baselines;
  if (run_iwf) baselines.push_back("iwf");
  if (run_swf) baselines.push_back("swf");

  json ext{{"tol", extrema_tol}, {"restarts", extrema_restarts}};
  if (pinned_extrema) {
    ext["sum_rate_max"] = pinned_extrema->first;
    ext["sum_rate_min"] = pinned_extrema->second;
  }

  return json{{"schema", schema},
              {"name", name},
              {"system", sys},
              {"fading", fad},
              {"solver", json{{"tau", tau}, {"schedule", sched}, {"residual_tol", residual_tol}}},
              {"engine", engine == EngineKind::kSync ? "sync" : "async"},
              {"update_schedule", upd},
              {"delays", del},
              {"noise", noi},
              {"baselines", baselines},
              {"extrema", ext},
              {"iters", iters},
              {"seed", seed}};
}

std::uint64_t Scenario::hash() const {
  const std::string repr = canonical_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : repr) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<int> Scenario::tx_antennas() const { return system.tx_antennas(seed); }

ChannelState Scenario::channel_at(std::int64_t epoch) const {
  ChannelState channel;
  channel.rx_antennas = system.rx_antennas;
  channel.powers = system.powers();
  channel.channels = fading.process(seed).sample(system.rx_antennas, tx_antennas(), epoch);
  return channel;
}

}  // namespace dxl

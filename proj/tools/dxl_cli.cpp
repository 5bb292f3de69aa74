// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: abstract spectrahedron solves, the MIMO scenario
// runners (sync/async/noisy/fading), water-filling baselines and reference
// extrema. Exit codes: 0 success, 2 config error, 3 numeric failure,
// 4 non-convergence under --strict.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "dxl/estimation.hpp"
#include "dxl/harness.hpp"
#include "dxl/scenario.hpp"

namespace {

using dxl::config_error;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitNonConverged = 4;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> iters;
  std::optional<double> tau;
  bool quiet = false;
  bool strict = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path, "scenario/problem JSON file")->required();
  cmd->add_option("--out", flags->out_dir, "output directory");
  cmd->add_option("--seed", flags->seed, "override the config seed");
  cmd->add_option("--iters", flags->iters, "override the iteration budget");
  cmd->add_option("--tau", flags->tau, "override the discount parameter");
  cmd->add_flag("--quiet", flags->quiet, "suppress progress output");
  cmd->add_flag("--strict", flags->strict, "exit 4 on non-convergence");
}

dxl::Scenario load_scenario(const CommonFlags& flags) {
  dxl::Scenario sc = dxl::Scenario::from_file(flags.config_path);
  if (flags.seed) sc.seed = *flags.seed;
  if (flags.iters) sc.iters = *flags.iters;
  if (flags.tau) sc.tau = *flags.tau;
  sc.validate();
  return sc;
}

int run_mimo(const CommonFlags& flags, dxl::EngineKind engine, const char* mode) {
  dxl::Scenario sc = load_scenario(flags);
  const std::string m(mode);
  if (m == "sync" && sc.noise.kind != dxl::NoiseKind::kNone) {
    throw config_error("mimo-sync expects noise.kind == none (use mimo-noisy)");
  }
  if (m == "noisy" && sc.noise.kind == dxl::NoiseKind::kNone) {
    throw config_error("mimo-noisy requires a noise model in the config");
  }
  if (m == "fading" && sc.fading.kind == dxl::FadingKind::kStatic) {
    throw config_error("mimo-fading requires a non-static fading model");
  }
  sc.engine = engine;
  const dxl::RunRecord record = dxl::run_scenario(sc, flags.out_dir);
  if (!flags.quiet) {
    std::cout << sc.name << ": " << record.rows.size() - 1 << " iterations, final efficiency "
              << record.rows.back().efficiency << ", sum rate "
              << record.rows.back().sum_rate_nats << " nats\n"
              << "wrote " << (std::filesystem::path(flags.out_dir) / (sc.name + ".csv")).string()
              << "\n";
    if (record.efficiency_overshoots > 0) {
      std::cout << "warning: " << record.efficiency_overshoots
                << " rows exceeded efficiency 1 (reference extrema may be loose)\n";
    }
  }
  if (flags.strict && !record.extrema_converged) {
    return kExitNonConverged;
  }
  return kExitOk;
}

int run_baseline(const CommonFlags& flags) {
  dxl::Scenario sc = load_scenario(flags);
  if (!sc.run_iwf && !sc.run_swf) {
    throw config_error("baseline requires a non-empty baselines list in the config");
  }
  const dxl::BaselineSummary summary = dxl::compare_baselines(sc, flags.out_dir);
  if (!flags.quiet) {
    for (const dxl::BaselineCurve& curve : summary.curves) {
      std::cout << curve.method << ": broadcasts to 0.99 efficiency = "
                << curve.broadcasts_to(0.99) << ", final = " << curve.efficiencies.back()
                << "\n";
    }
  }
  return kExitOk;
}

int run_extrema(const CommonFlags& flags) {
  dxl::Scenario sc = load_scenario(flags);
  const dxl::ChannelState channel = sc.channel_at(0);
  dxl::ExtremaOptions options;
  options.seed = sc.seed;
  options.restarts = sc.extrema_restarts;
  const dxl::Extrema ext = dxl::reference_extrema(channel, sc.extrema_tol, options);
  json doc{{"name", sc.name},
           {"sum_rate_max", ext.sum_rate_max},
           {"sum_rate_min", ext.sum_rate_min},
           {"max_converged", ext.max_converged},
           {"min_converged", ext.min_converged},
           {"max_gap", ext.max_gap}};
  std::filesystem::create_directories(flags.out_dir);
  const auto path = std::filesystem::path(flags.out_dir) / (sc.name + ".extrema.json");
  std::ofstream(path) << doc.dump(2) << "\n";
  if (!flags.quiet) {
    std::cout << doc.dump(2) << "\n";
  }
  if (flags.strict && !(ext.max_converged && ext.min_converged)) {
    return kExitNonConverged;
  }
  return kExitOk;
}

// ---- abstract solve subcommand ----

struct SolveProblem {
  std::string name;
  int dim = 2;
  dxl::HermitianMatrix objective = dxl::HermitianMatrix::Zero(2);
  double noise_eta = 0.0;
  dxl::SolverConfig config;
  std::int64_t iters = 1000;
};

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw config_error("solve config: unknown key '" + key + "' in " + where);
    }
  }
}

SolveProblem load_solve_problem(const CommonFlags& flags) {
  std::ifstream in(flags.config_path);
  if (!in) {
    throw config_error("cannot open config file " + flags.config_path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw config_error(std::string("JSON parse failure: ") + e.what());
  }
  reject_unknown(doc, {"schema", "name", "dim", "objective", "noise", "solver", "iters", "seed"},
                 "top level");
  if (!doc.contains("schema") || doc.at("schema").get<int>() != 1) {
    throw config_error("solve config: schema field missing or unsupported");
  }

  SolveProblem p;
  p.name = doc.at("name").get<std::string>();
  p.dim = doc.at("dim").get<int>();
  if (p.dim < 1) {
    throw config_error("solve config: dim must be >= 1");
  }
  p.config.seed = doc.at("seed").get<std::uint64_t>();
  p.iters = doc.at("iters").get<std::int64_t>();

  const json& obj = doc.at("objective");
  reject_unknown(obj, {"kind", "bound", "matrix", "seed"}, "objective");
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "random-linear") {
    const double bound = obj.value("bound", 1.0);
    const std::uint64_t seed = obj.value("seed", p.config.seed);
    p.objective = dxl::random_hermitian(p.dim, bound, seed);
  } else if (kind == "linear") {
    const auto rows = obj.at("matrix");
    dxl::MatrixXc m(p.dim, p.dim);
    if (static_cast<int>(rows.size()) != p.dim) {
      throw config_error("solve config: objective matrix must be dim x dim");
    }
    for (int i = 0; i < p.dim; ++i) {
      if (static_cast<int>(rows[i].size()) != p.dim) {
        throw config_error("solve config: objective matrix must be dim x dim");
      }
      for (int j = 0; j < p.dim; ++j) {
        const auto& e = rows[i][j];
        m(i, j) = dxl::Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
    p.objective = dxl::HermitianMatrix(m);
  } else {
    throw config_error("solve config: unknown objective kind '" + kind + "'");
  }

  if (doc.contains("noise")) {
    const json& noi = doc.at("noise");
    reject_unknown(noi, {"kind", "eta"}, "noise");
    const std::string nk = noi.at("kind").get<std::string>();
    if (nk == "additive") {
      p.noise_eta = noi.at("eta").get<double>();
    } else if (nk != "none") {
      throw config_error("solve config: unknown noise kind '" + nk + "'");
    }
  }

  const json& solver = doc.at("solver");
  reject_unknown(solver, {"tau", "schedule", "residual_tol"}, "solver");
  p.config.tau = solver.at("tau").get<double>();
  const json& sched = solver.at("schedule");
  reject_unknown(sched, {"kind", "gamma0", "exponent"}, "solver.schedule");
  const std::string sk = sched.at("kind").get<std::string>();
  const double gamma0 = sched.at("gamma0").get<double>();
  if (sk == "constant") {
    p.config.schedule = dxl::StepSchedule::Constant(gamma0);
  } else if (sk == "harmonic") {
    p.config.schedule = dxl::StepSchedule::Harmonic(gamma0);
  } else if (sk == "power") {
    p.config.schedule = dxl::StepSchedule::Power(gamma0, sched.at("exponent").get<double>());
  } else {
    throw config_error("solve config: unknown schedule kind '" + sk + "'");
  }
  p.config.residual_tol = solver.value("residual_tol", 1e-9);
  p.config.max_iters = p.iters;
  p.config.record_stride = 1;
  return p;
}

int run_solve(const CommonFlags& flags) {
  SolveProblem p = load_solve_problem(flags);
  if (flags.seed) p.config.seed = *flags.seed;
  if (flags.iters) {
    p.iters = *flags.iters;
    p.config.max_iters = *flags.iters;
  }
  if (flags.tau) p.config.tau = *flags.tau;
  p.config.validate();
  if (p.iters > 100000) {
    p.config.record_stride = p.iters / 100000;  // cap trajectory memory
  }

  const dxl::GradientOracle oracle = p.noise_eta > 0.0
                                         ? dxl::noisy_linear_oracle(p.objective, p.noise_eta)
                                         : dxl::GradientOracle::Linear(p.objective);
  const dxl::SolveResult result = dxl::solve(oracle, p.dim, p.config);
  const dxl::SpectraPoint gibbs = dxl::gibbs_solution(p.objective, p.config.tau);

  std::string csv = "iteration,gamma,f_value,f_tau,entropy,residual,dist_to_gibbs\n";
  for (const dxl::AgentState& state : result.trajectory) {
    const double f = dxl::trace_inner(p.objective, state.point.matrix());
    const double h = dxl::vn_entropy(state.point);
    const double res =
        state.iter == 0 ? 0.0
                        : dxl::score_residual(p.objective, state.score, p.config.tau);
    const double dist = (state.point.matrix().mat() - gibbs.matrix().mat()).norm();
    csv += std::to_string(state.iter) + ',' +
           dxl::format_double(state.iter == 0 ? 0.0 : p.config.schedule.gamma(state.iter)) +
           ',' + dxl::format_double(f) + ',' + dxl::format_double(f + p.config.tau * h) + ',' +
           dxl::format_double(h) + ',' + dxl::format_double(res) + ',' +
           dxl::format_double(dist) + '\n';
  }
  std::filesystem::create_directories(flags.out_dir);
  const auto csv_path = std::filesystem::path(flags.out_dir) / (p.name + ".csv");
  std::ofstream(csv_path) << csv;

  json manifest{{"name", p.name},
                {"dim", p.dim},
                {"tau", p.config.tau},
                {"seed", p.config.seed},
                {"iterations", result.iterations},
                {"converged", result.converged},
                {"final_residual", result.final_residual}};
  std::ofstream(std::filesystem::path(flags.out_dir) / (p.name + ".manifest.json"))
      << manifest.dump(2) << "\n";

  if (!flags.quiet) {
    std::cout << p.name << ": " << result.iterations << " iterations, residual "
              << result.final_residual << (result.converged ? " (converged)" : "") << "\n"
              << "wrote " << csv_path.string() << "\n";
  }
  if (flags.strict && !result.converged) {
    return kExitNonConverged;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discounted matrix exponential learning over the spectrahedron"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* solve = app.add_subcommand("solve", "abstract stochastic SDP from a problem config");
  CLI::App* sync = app.add_subcommand("mimo-sync", "synchronous MIMO rate maximization");
  CLI::App* async_cmd = app.add_subcommand("mimo-async", "asynchronous MIMO rate maximization");
  CLI::App* noisy = app.add_subcommand("mimo-noisy", "MIMO with noisy/sampled feedback");
  CLI::App* fading = app.add_subcommand("mimo-fading", "MIMO under a fading channel");
  CLI::App* baseline = app.add_subcommand("baseline", "water-filling baseline comparison");
  CLI::App* extrema = app.add_subcommand("extrema", "reference extrema of the sum rate");
  for (CLI::App* cmd : {solve, sync, async_cmd, noisy, fading, baseline, extrema}) {
    add_common_flags(cmd, &flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve->parsed()) return run_solve(flags);
    if (sync->parsed()) return run_mimo(flags, dxl::EngineKind::kSync, "sync");
    if (async_cmd->parsed()) return run_mimo(flags, dxl::EngineKind::kAsync, "async");
    if (noisy->parsed()) return run_mimo(flags, dxl::EngineKind::kSync, "noisy");
    if (fading->parsed()) return run_mimo(flags, dxl::EngineKind::kSync, "fading");
    if (baseline->parsed()) return run_baseline(flags);
    if (extrema->parsed()) return run_extrema(flags);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const dxl::eigensolver_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

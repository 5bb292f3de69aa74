// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP kernel comparison: gradient broadcasts, Monte Carlo
// estimator reductions, extrema searches and solve pools.

#include <benchmark/benchmark.h>

#include "dxl/estimation.hpp"
#include "dxl/extrema.hpp"
#include "dxl/parallel.hpp"
#include "dxl/rng.hpp"
#include "dxl/solver.hpp"

namespace {

dxl::ChannelState make_channel(int users, int rx, int tx, std::uint64_t seed) {
  dxl::ChannelState channel;
  channel.rx_antennas = rx;
  channel.powers.assign(users, 1.0);
  channel.channels =
      dxl::FadingProcess::Static(seed).sample(rx, std::vector<int>(users, tx), 0);
  return channel;
}

void BM_GradientBroadcastSerial(benchmark::State& state) {
  const auto channel = make_channel(static_cast<int>(state.range(0)), 5, 4, 17);
  const auto profile = dxl::TransmitProfile::Uniform(channel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dxl::rate_gradient_all_serial(channel, profile));
  }
}
BENCHMARK(BM_GradientBroadcastSerial)->Arg(25)->Arg(100);

void BM_GradientBroadcastOmp(benchmark::State& state) {
  const auto channel = make_channel(static_cast<int>(state.range(0)), 5, 4, 17);
  const auto profile = dxl::TransmitProfile::Uniform(channel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dxl::rate_gradient_all(channel, profile));
  }
}
BENCHMARK(BM_GradientBroadcastOmp)->Arg(25)->Arg(100);

void run_mc_mean(int trials, bool parallel) {
  const auto channel = make_channel(2, 2, 2, 3);
  const auto profile = dxl::TransmitProfile::Uniform(channel);
  using Acc = dxl::MatrixXc;
  auto result = dxl::par::blocked_reduce<Acc>(
      trials, [] { return Acc::Zero(2, 2); },
      [&](Acc& acc, std::int64_t i) {
        dxl::SignalSampler sampler(channel, profile, 8, dxl::mix_seed(11, i));
        acc += dxl::sample_covariance(sampler.draw()).mat();
      },
      [](Acc& total, const Acc& part) { total += part; }, parallel);
  benchmark::DoNotOptimize(result);
}

void BM_SampleCovarianceMeanSerial(benchmark::State& state) {
  for (auto _ : state) run_mc_mean(static_cast<int>(state.range(0)), false);
}
BENCHMARK(BM_SampleCovarianceMeanSerial)->Arg(4096);

void BM_SampleCovarianceMeanOmp(benchmark::State& state) {
  for (auto _ : state) run_mc_mean(static_cast<int>(state.range(0)), true);
}
BENCHMARK(BM_SampleCovarianceMeanOmp)->Arg(4096);

void BM_ReferenceExtrema(benchmark::State& state) {
  const auto channel = make_channel(10, 4, 3, 23);
  for (auto _ : state) {
    dxl::ExtremaOptions options;
    options.seed = 5;
    options.restarts = 200;
    options.parallel = state.range(0) != 0;
    benchmark::DoNotOptimize(dxl::reference_extrema(channel, 1e-4, options));
  }
}
BENCHMARK(BM_ReferenceExtrema)->Arg(0)->Arg(1);

void run_solve_pool(bool parallel) {
  const int runs = 32;
  std::vector<dxl::SolveResult> results(runs);
  auto body = [&](std::int64_t i) {
    const dxl::HermitianMatrix c = dxl::random_hermitian(4, 1.0, dxl::mix_seed(7, i));
    dxl::SolverConfig config;
    config.tau = 0.1;
    config.schedule = dxl::StepSchedule::Harmonic(10.0);
    config.max_iters = 2000;
    config.residual_tol = 1e-12;
    config.seed = dxl::mix_seed(13, i);
    config.record_stride = 0;
    results[i] = dxl::solve(dxl::noisy_linear_oracle(c, 1.0), 4, config);
  };
  if (parallel) {
    dxl::par::parallel_for(runs, body);
  } else {
    dxl::par::serial_for(runs, body);
  }
  benchmark::DoNotOptimize(results);
}

void BM_SolvePoolSerial(benchmark::State& state) {
  for (auto _ : state) run_solve_pool(false);
}
BENCHMARK(BM_SolvePoolSerial);

void BM_SolvePoolOmp(benchmark::State& state) {
  for (auto _ : state) run_solve_pool(true);
}
BENCHMARK(BM_SolvePoolOmp);

}  // namespace

BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dxl/estimation.hpp"
#include "dxl/rng.hpp"
#include "dxl/solver.hpp"
#include "support.hpp"

using namespace dxl;
using test::diag2;
using test::frob_dist;

TEST_CASE("step schedules") {
  CHECK(StepSchedule::Constant(0.3).gamma(7) == 0.3);
  CHECK(StepSchedule::Harmonic(2.0).gamma(4) == doctest::Approx(0.5));
  CHECK(StepSchedule::Power(1.0, 0.5).gamma(4) == doctest::Approx(0.5));
  CHECK_THROWS_AS(StepSchedule::Power(1.0, 1.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(StepSchedule::Constant(-1.0).validate(), std::invalid_argument);

  SolverConfig config;
  config.tau = 2.0;
  config.schedule = StepSchedule::Constant(0.6);  // violates gamma0 < 1/tau
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.schedule = StepSchedule::Constant(0.4);
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("dxl_step analytic cases") {
  const AgentState start = AgentState::Initial(2);

  SUBCASE("single gradient step from zero, tau = 0") {
    const AgentState next = dxl_step(start, diag2(1.0, -1.0), 1.0, 0.0);
    CHECK(frob_dist(next.score, diag2(-1.0, 1.0)) < 1e-14);
    const double e2 = std::exp(2.0);
    CHECK(next.point.matrix().mat()(0, 0).real() ==
          doctest::Approx(1.0 / (1.0 + e2)).epsilon(1e-10));
    CHECK(next.point.matrix().mat()(1, 1).real() ==
          doctest::Approx(e2 / (1.0 + e2)).epsilon(1e-10));
    CHECK(next.point.matrix().mat()(0, 0).real() == doctest::Approx(0.119203).epsilon(1e-5));
    CHECK(next.iter == 1);
  }

  SUBCASE("gamma = 1, tau = 1 resets any score to zero") {
    AgentState state = dxl_step(start, diag2(2.0, -3.0), 0.7, 0.5);
    const AgentState reset = dxl_step(state, HermitianMatrix::Zero(2), 1.0, 1.0);
    CHECK(reset.score.frobenius_norm() < 1e-14);
    CHECK(frob_dist(reset.point, SpectraPoint::Uniform(2)) < 1e-14);
  }

  SUBCASE("gamma = 0 leaves the state unchanged") {
    const AgentState same = dxl_step(start, diag2(5.0, 1.0), 0.0, 0.7);
    CHECK(frob_dist(same.score, start.score) == 0.0);
    CHECK(frob_dist(same.point, start.point) == 0.0);
  }

  CHECK_THROWS_AS(dxl_step(start, HermitianMatrix::Zero(3), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("gibbs_solution analytic cases") {
  const SpectraPoint g = gibbs_solution(diag2(1.0, 0.0), 1.0);
  const double z = std::exp(-1.0) + 1.0;
  CHECK(g.matrix().mat()(0, 0).real() == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-12));
  CHECK(g.matrix().mat()(1, 1).real() == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(g.matrix().mat()(0, 0).real() == doctest::Approx(0.268941).epsilon(1e-5));

  CHECK(frob_dist(gibbs_solution(HermitianMatrix::Zero(3), 0.5), SpectraPoint::Uniform(3)) <
        1e-14);

  const HermitianMatrix c = random_hermitian(4, 1.0, 3);
  CHECK(frob_dist(gibbs_solution(c, 1e6), SpectraPoint::Uniform(4)) < 1e-5);
  CHECK_THROWS_AS(gibbs_solution(c, 0.0), std::invalid_argument);
}

TEST_CASE("perturbed_objective") {
  const SpectraPoint half = SpectraPoint::Uniform(2);
  CHECK(perturbed_objective(0.5, half, 1.0) == doctest::Approx(0.5 - std::log(2.0)));
  CHECK(perturbed_objective(0.5, half, 1.0) == doctest::Approx(-0.193147).epsilon(1e-5));
  CHECK(perturbed_objective(0.37, half, 0.0) == doctest::Approx(0.37));
  const SpectraPoint pure{diag2(1.0, 0.0)};
  CHECK(perturbed_objective(0.0, pure, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("fixed_point_residual analytic cases and the score-space identity") {
  // At the Gibbs point the residual vanishes across a fuzz grid. The grid
  // keeps tau away from zero so the Gibbs point stays comfortably interior:
  // the X-space residual takes a matrix logarithm, which loses all accuracy
  // once eigenvalues reach the machine-epsilon floor. (The score-space form
  // below is exact for arbitrarily extreme spectra and is what the solver
  // monitors.)
  const double taus[] = {0.25, 1.0, 2.5};
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 2 + trial % 4;
    const double tau = taus[trial % 3];
    const HermitianMatrix c = random_hermitian(dim, 1.5, mix_seed(55, trial));
    CHECK(fixed_point_residual(c, gibbs_solution(c, tau), tau) < 1e-9);
  }

  // Score-space residual at the exact fixed point, including extreme tau.
  for (double tau : {1e-2, 1e-1, 1.0, 1e2}) {
    const HermitianMatrix c = random_hermitian(4, 1.5, 56);
    CHECK(score_residual(c, c * (-1.0 / tau), tau) < 1e-14);
  }

  CHECK(fixed_point_residual(diag2(1.0, -1.0), SpectraPoint::Uniform(2), 1.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  for (double c : {-2.0, 0.0, 3.5}) {
    for (double tau : {0.1, 1.0}) {
      CHECK(fixed_point_residual(HermitianMatrix::Identity(3) * c, SpectraPoint::Uniform(3),
                                 tau) < 1e-12);
    }
  }

  CHECK_THROWS_AS(fixed_point_residual(diag2(1.0, 0.0), SpectraPoint{diag2(1.0, 0.0)}, 1.0),
                  std::domain_error);

  // score_residual(V, Y, tau) == fixed_point_residual(V, exp_project(Y), tau).
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 4;
    const HermitianMatrix v = random_hermitian(dim, 2.0, mix_seed(61, trial));
    const HermitianMatrix y = random_hermitian(dim, 3.0, mix_seed(62, trial));
    const double tau = 0.05 + 0.1 * (trial % 5);
    CHECK(score_residual(v, y, tau) ==
          doctest::Approx(fixed_point_residual(v, exp_project(y), tau)).epsilon(1e-8));
  }
}

TEST_CASE("solve: deterministic linear objective reaches the Gibbs point") {
  const HermitianMatrix c = diag2(1.0, 0.0);
  SolverConfig config;
  config.tau = 1.0;
  config.schedule = StepSchedule::Harmonic(1.0);
  config.max_iters = 500;
  config.residual_tol = 1e-12;
  config.seed = 4;
  const SolveResult result = solve(GradientOracle::Linear(c), 2, config);
  CHECK(frob_dist(result.final_state().point, gibbs_solution(c, 1.0)) < 1e-6);
  CHECK(result.converged);
  CHECK(result.iterations <= 500);
}

TEST_CASE("solve: singleton spectrahedron is fixed at [1]") {
  const HermitianMatrix c = random_hermitian(1, 1.0, 8);
  SolverConfig config;
  config.tau = 0.5;
  config.schedule = StepSchedule::Harmonic(1.0);
  config.max_iters = 50;
  config.residual_tol = 1e-15;
  const SolveResult result = solve(GradientOracle::Linear(c), 1, config);
  for (const AgentState& state : result.trajectory) {
    CHECK(state.point.matrix().mat()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("solve: bitwise deterministic replay with a stochastic oracle") {
  const HermitianMatrix c = random_hermitian(3, 1.0, 12);
  SolverConfig config;
  config.tau = 0.2;
  config.schedule = StepSchedule::Harmonic(5.0);
  config.max_iters = 300;
  config.residual_tol = 1e-13;
  config.seed = 77;
  const SolveResult a = solve(noisy_linear_oracle(c, 1.0), 3, config);
  const SolveResult b = solve(noisy_linear_oracle(c, 1.0), 3, config);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK((a.trajectory[i].score.mat() - b.trajectory[i].score.mat()).norm() == 0.0);
    CHECK((a.trajectory[i].point.matrix().mat() - b.trajectory[i].point.matrix().mat()).norm() ==
          0.0);
  }

  config.seed = 78;
  const SolveResult other = solve(noisy_linear_oracle(c, 1.0), 3, config);
  CHECK(frob_dist(other.final_state().score, a.final_state().score) > 0.0);
}

TEST_CASE("solve: noisy oracle converges near the Gibbs point (smoke scale)") {
  const HermitianMatrix c = random_hermitian(3, 1.0, 21);
  const double tau = 0.5;
  SolverConfig config;
  config.tau = tau;
  // gamma0 * tau != 1, so the running-mean identity does not fire the stop.
  config.schedule = StepSchedule::Harmonic(0.9 / tau);
  config.max_iters = 20000;
  config.residual_tol = 1e-13;
  config.record_stride = 0;
  const SpectraPoint target = gibbs_solution(c, tau);

  MatrixXc mean = MatrixXc::Zero(3, 3);
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    config.seed = mix_seed(900, s);
    const SolveResult r = solve(noisy_linear_oracle(c, 1.0), 3, config);
    mean += r.final_state().point.matrix().mat();
  }
  mean /= static_cast<double>(seeds);
  CHECK((mean - target.matrix().mat()).norm() < 1e-2);
}

TEST_CASE("boundedness of the score matrix under a bounded oracle") {
  const int dim = 3;
  const double v_bound = 2.0;
  const double tau = 0.5;
  const double gamma = 1.0;  // < 1/tau
  GradientOracle oracle(
      dim, v_bound,
      [v_bound](const SpectraPoint&, std::int64_t n, std::mt19937_64& rng) {
        HermitianMatrix g = random_hermitian(3, 1.0, rng());
        (void)n;
        return g * (v_bound / std::max(g.frobenius_norm(), 1e-12));
      },
      /*ignores_point=*/true);

  SolverConfig config;
  config.tau = tau;
  config.schedule = StepSchedule::Constant(gamma);
  config.max_iters = 5000;
  config.residual_tol = 1e-15;
  config.record_stride = 1;
  config.seed = 5;
  const SolveResult result = solve(oracle, dim, config);
  const double bound = v_bound / tau + gamma * v_bound;  // ||Y(0)|| = 0
  for (const AgentState& state : result.trajectory) {
    CHECK(state.score.frobenius_norm() <= bound + 1e-9);
  }
}

TEST_CASE("primal_vector_field: analytic cases") {
  const SpectraPoint half = SpectraPoint::Uniform(2);
  const HermitianMatrix field = primal_vector_field(half, diag2(1.0, -1.0));
  CHECK(frob_dist(field, diag2(-0.5, 0.5)) < 1e-12);

  for (double c : {-1.0, 2.0}) {
    const SpectraPoint x = test::random_point(3, 17, 2.0);
    const HermitianMatrix zero = primal_vector_field(x, HermitianMatrix::Identity(3) * c);
    CHECK(zero.frobenius_norm() < 1e-12);
  }
}

TEST_CASE("primal_vector_field matches the quadrature oracle") {
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial % 4;
    const SpectraPoint x = test::random_point(dim, mix_seed(71, trial), 2.0);
    const HermitianMatrix v_tau = random_hermitian(dim, 2.0, mix_seed(72, trial));

    // 10^4-point trapezoid rule for int_0^1 X^{1-s} V X^s ds.
    const int points = 10000;
    MatrixXc integral = MatrixXc::Zero(dim, dim);
    for (int i = 0; i <= points; ++i) {
      const double s = static_cast<double>(i) / points;
      const double w = (i == 0 || i == points) ? 0.5 : 1.0;
      integral += w * test::herm_pow(x.matrix(), 1.0 - s) * v_tau.mat() *
                  test::herm_pow(x.matrix(), s);
    }
    integral /= points;
    const MatrixXc expected =
        -integral + trace_inner(x.matrix(), v_tau) * x.matrix().mat();

    const HermitianMatrix field = primal_vector_field(x, v_tau);
    CHECK((field.mat() - expected).norm() < 1e-6);
    CHECK(std::abs(field.trace()) < 1e-10);
    CHECK((field.mat() - field.mat().adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("Euler integration of the primal field decreases the perturbed objective") {
  for (int trial = 0; trial < 3; ++trial) {
    const int dim = 3;
    const double tau = trial == 0 ? 1.0 : 0.3;
    const HermitianMatrix c = random_hermitian(dim, 1.0, mix_seed(81, trial));
    SpectraPoint x = SpectraPoint::Uniform(dim);
    double previous = perturbed_objective(trace_inner(c, x.matrix()), x, tau);
    const double dt = 1e-3;
    for (int step = 0; step < 200000; ++step) {
      if (fixed_point_residual(c, x, tau) < 1e-6) {
        break;
      }
      const HermitianMatrix v_tau = c + herm_log(x.matrix()) * tau;
      const HermitianMatrix dot = primal_vector_field(x, v_tau);
      x = SpectraPoint(x.matrix() + dot * dt);
      const double value = perturbed_objective(trace_inner(c, x.matrix()), x, tau);
      CHECK(value <= previous + 1e-9);
      previous = value;
    }
    CHECK(fixed_point_residual(c, x, tau) < 1e-6);
    CHECK(frob_dist(x, gibbs_solution(c, tau)) < 1e-4);
  }
}

TEST_CASE("gradient convention: finite differences of tr(CX) along traceless directions") {
  const HermitianMatrix c = random_hermitian(3, 1.0, 31);
  const SpectraPoint x = test::random_point(3, 32, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix d = random_hermitian(3, 1.0, mix_seed(33, trial)).traceless();
    const double h = 1e-6;
    const double plus = trace_inner(c, x.matrix() + d * h);
    const double minus = trace_inner(c, x.matrix() - d * h);
    CHECK((plus - minus) / (2 * h) == doctest::Approx(trace_inner(c, d)).epsilon(1e-6));
  }
}

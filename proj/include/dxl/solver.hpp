// SPDX-License-Identifier: Apache-2.0
//
// Single-agent discounted exponential learning: the score-matrix recursion
// Y <- Y - gamma (V + tau Y), X = exp(Y)/tr exp(Y), step schedules, the
// entropy-perturbed objective, fixed-point diagnostics, and the
// continuous-time primal vector field used as a Lyapunov validator.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dxl/hermitian.hpp"

namespace dxl {

enum class StepKind { kConstant, kHarmonic, kPower };

/// Step-size sequence gamma_n, n >= 1.
///   constant:  gamma_n = gamma0
///   harmonic:  gamma_n = gamma0 / n        (square-summable, not summable)
///   power:     gamma_n = gamma0 * n^(-a)   with a in (0, 1]
struct StepSchedule {
  StepKind kind = StepKind::kHarmonic;
  double gamma0 = 1.0;
  double exponent = 1.0;  // power kind only

  double gamma(std::int64_t n) const;
  void validate() const;

  static StepSchedule Constant(double gamma0) { return {StepKind::kConstant, gamma0, 1.0}; }
  static StepSchedule Harmonic(double gamma0) { return {StepKind::kHarmonic, gamma0, 1.0}; }
  static StepSchedule Power(double gamma0, double a) { return {StepKind::kPower, gamma0, a}; }
};

struct SolverConfig {
  double tau = 0.1;  // discount parameter, > 0
  StepSchedule schedule{};
  std::int64_t max_iters = 10000;
  double residual_tol = 1e-9;
  std::uint64_t seed = 0;
  /// Trajectory recording stride; 0 records only the initial and final states.
  std::int64_t record_stride = 1;

  void validate() const;
};

/// One agent's score matrix Y, primal point X = exp_project(Y), and iteration
/// counter.
struct AgentState {
  HermitianMatrix score;  // Y
  SpectraPoint point;     // X
  std::int64_t iter = 0;

  static AgentState Initial(int dim);
};

/// Stochastic first-order oracle: a callable returning a bounded Hermitian
/// estimate whose conditional mean is the gradient of the objective being
/// minimized. `ignores_point` marks oracles whose value does not depend on the
/// primal point (e.g. linear objectives); the solver may then pass a stale
/// iterate and skip the per-step exponential projection.
class GradientOracle {
 public:
  using Fn = std::function<HermitianMatrix(const SpectraPoint&, std::int64_t, std::mt19937_64&)>;

  GradientOracle(int dim, double bound, Fn fn, bool ignores_point = false)
      : dim_(dim), bound_(bound), fn_(std::move(fn)), ignores_point_(ignores_point) {}

  HermitianMatrix evaluate(const SpectraPoint& x, std::int64_t epoch, std::mt19937_64& rng) const {
    return fn_(x, epoch, rng);
  }

  int dim() const { return dim_; }
  double bound() const { return bound_; }
  bool ignores_point() const { return ignores_point_; }

  /// Deterministic oracle for the linear objective F(X) = tr(CX).
  static GradientOracle Linear(const HermitianMatrix& c);

 private:
  int dim_;
  double bound_;
  Fn fn_;
  bool ignores_point_;
};

struct SolveResult {
  std::vector<AgentState> trajectory;  // recorded states; always ends with the final state
  std::int64_t iterations = 0;
  double final_residual = 0.0;
  bool converged = false;

  const AgentState& final_state() const { return trajectory.back(); }
};

/// One DXL update: Y' = Y - gamma (V + tau Y), X' = exp_project(Y').
/// Minimization convention: `grad` estimates the gradient of the objective
/// being minimized.
AgentState dxl_step(const AgentState& state, const HermitianMatrix& grad, double gamma,
                    double tau);

/// Run the recursion from Y = 0 until the traceless first-order residual of
/// the running-mean gradient drops below residual_tol or max_iters is hit.
///
/// Note an exact algebraic identity: with harmonic steps and gamma0 = 1/tau,
/// the recursion reduces to Y(n) = -mean(V(1..n))/tau, so the running-mean
/// residual is identically zero and the stopping rule fires immediately.
/// Stochastic runs that should exhaust their budget want gamma0 * tau != 1.
SolveResult solve(const GradientOracle& oracle, int dim, const SolverConfig& config);

/// F_tau(X) = F(X) + tau tr[X log X]; the caller supplies F(X).
double perturbed_objective(double f_value, const SpectraPoint& x, double tau);

/// Frobenius norm of the traceless part of V + tau (log X + I); zero iff X is
/// the first-order point of the tau-perturbed problem for gradient V.
double fixed_point_residual(const HermitianMatrix& v, const SpectraPoint& x, double tau);

/// Identical quantity computed from the score matrix: for X = exp_project(Y)
/// the traceless part of log X equals the traceless part of Y, so this is
/// ||traceless(V + tau Y)||_F without forming X (safe for extreme spectra).
double score_residual(const HermitianMatrix& v, const HermitianMatrix& score, double tau);

/// Closed-form minimizer exp_project(-C/tau) of tr(CX) + tau tr[X log X].
SpectraPoint gibbs_solution(const HermitianMatrix& c, double tau);

/// Right-hand side of the continuous-time primal dynamics,
///   Xdot = -int_0^1 X^{1-s} V_tau X^s ds + tr[X V_tau] X,
/// evaluated in X's eigenbasis via divided differences of exp. The caller
/// supplies V_tau = V + tau log X. Result is Hermitian and traceless.
HermitianMatrix primal_vector_field(const SpectraPoint& x, const HermitianMatrix& v_tau);

}  // namespace dxl

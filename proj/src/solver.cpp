// SPDX-License-Identifier: Apache-2.0

#include "dxl/solver.hpp"

#include <cmath>

#include "dxl/rng.hpp"

namespace dxl {

double StepSchedule::gamma(std::int64_t n) const {
  switch (kind) {
    case StepKind::kConstant:
      return gamma0;
    case StepKind::kHarmonic:
      return gamma0 / static_cast<double>(n);
    case StepKind::kPower:
      return gamma0 * std::pow(static_cast<double>(n), -exponent);
  }
  throw std::logic_error("StepSchedule: unknown kind");
}

void StepSchedule::validate() const {
  if (gamma0 <= 0.0) {
    throw std::invalid_argument("StepSchedule: gamma0 must be > 0");
  }
  if (kind == StepKind::kPower && (exponent <= 0.0 || exponent > 1.0)) {
    throw std::invalid_argument("StepSchedule: power exponent must lie in (0, 1]");
  }
}

void SolverConfig::validate() const {
  schedule.validate();
  if (tau <= 0.0) {
    throw std::invalid_argument("SolverConfig: tau must be > 0");
  }
  if (schedule.kind == StepKind::kConstant && schedule.gamma0 >= 1.0 / tau) {
    throw std::invalid_argument("SolverConfig: constant step requires gamma0 < 1/tau");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  }
  if (residual_tol <= 0.0) {
    throw std::invalid_argument("SolverConfig: residual_tol must be > 0");
  }
}

AgentState AgentState::Initial(int dim) {
  return {HermitianMatrix::Zero(dim), SpectraPoint::Uniform(dim), 0};
}

GradientOracle GradientOracle::Linear(const HermitianMatrix& c) {
  const HermitianEig eig = herm_eig(c);
  const double bound = eig.values.cwiseAbs().maxCoeff();
  return GradientOracle(
      c.dim(), bound,
      [c](const SpectraPoint&, std::int64_t, std::mt19937_64&) { return c; },
      /*ignores_point=*/true);
}

namespace {

MatrixXc step_score(const MatrixXc& y, const MatrixXc& grad, double gamma, double tau) {
  return y - gamma * (grad + tau * y);
}

}  // namespace

AgentState dxl_step(const AgentState& state, const HermitianMatrix& grad, double gamma,
                    double tau) {
  if (grad.dim() != state.score.dim()) {
    throw std::invalid_argument("dxl_step: gradient dimension mismatch");
  }
  HermitianMatrix score = trusted_hermitian(step_score(state.score.mat(), grad.mat(), gamma, tau));
  SpectraPoint point = exp_project(score);
  return {std::move(score), std::move(point), state.iter + 1};
}

SolveResult solve(const GradientOracle& oracle, int dim, const SolverConfig& config) {
  config.validate();
  if (oracle.dim() != dim) {
    throw std::invalid_argument("solve: oracle dimension mismatch");
  }

  std::mt19937_64 rng(config.seed);
  AgentState state = AgentState::Initial(dim);
  MatrixXc grad_mean = MatrixXc::Zero(dim, dim);

  SolveResult result;
  result.trajectory.push_back(state);

  // Oracles that never read the point allow skipping the per-step projection;
  // X is materialized whenever a state is recorded.
  const bool lazy_point = oracle.ignores_point();
  MatrixXc score = state.score.mat();

  for (std::int64_t n = 1; n <= config.max_iters; ++n) {
    const double gamma = config.schedule.gamma(n);
    const HermitianMatrix grad = oracle.evaluate(state.point, n, rng);
    score = step_score(score, grad.mat(), gamma, config.tau);
    grad_mean += (grad.mat() - grad_mean) / static_cast<double>(n);

    HermitianMatrix score_h = trusted_hermitian(score);
    result.final_residual =
        score_residual(trusted_hermitian(grad_mean), score_h, config.tau);
    const bool done = result.final_residual < config.residual_tol || n == config.max_iters;
    const bool record = config.record_stride > 0 && n % config.record_stride == 0;

    if (record || done || !lazy_point) {
      state = AgentState{score_h, exp_project(score_h), n};
      if (record && !done) {
        result.trajectory.push_back(state);
      }
    } else {
      state.iter = n;
    }

    if (done) {
      result.trajectory.push_back(state);
      result.iterations = n;
      result.converged = result.final_residual < config.residual_tol;
      break;
    }
  }
  return result;
}

double perturbed_objective(double f_value, const SpectraPoint& x, double tau) {
  return f_value + tau * vn_entropy(x);
}

double fixed_point_residual(const HermitianMatrix& v, const SpectraPoint& x, double tau) {
  if (v.dim() != x.dim()) {
    throw std::invalid_argument("fixed_point_residual: dimension mismatch");
  }
  const HermitianMatrix log_x = herm_log(x.matrix(), /*clamp_eigenvalues=*/false);
  const HermitianMatrix g = v + tau * (log_x + HermitianMatrix::Identity(x.dim()));
  return g.traceless().frobenius_norm();
}

double score_residual(const HermitianMatrix& v, const HermitianMatrix& score, double tau) {
  if (v.dim() != score.dim()) {
    throw std::invalid_argument("score_residual: dimension mismatch");
  }
  return (v + tau * score).traceless().frobenius_norm();
}

SpectraPoint gibbs_solution(const HermitianMatrix& c, double tau) {
  if (tau <= 0.0) {
    throw std::invalid_argument("gibbs_solution: tau must be > 0");
  }
  return exp_project(c * (-1.0 / tau));
}

HermitianMatrix primal_vector_field(const SpectraPoint& x, const HermitianMatrix& v_tau) {
  if (v_tau.dim() != x.dim()) {
    throw std::invalid_argument("primal_vector_field: dimension mismatch");
  }
  const HermitianEig eig = herm_eig(x.matrix());
  const int d = x.dim();
  if (eig.values.minCoeff() <= 0.0) {
    throw std::domain_error("primal_vector_field: point must be strictly positive-definite");
  }
  Eigen::VectorXd logs = eig.values.array().log();

  // Integral term in X's eigenbasis: entry (i,j) is Vt_ij * dd(y_i, y_j) with
  // dd the divided difference of exp, dd(y,y) = e^y.
  MatrixXc vt = eig.vectors.adjoint() * v_tau.mat() * eig.vectors;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double yi = logs[i];
      const double yj = logs[j];
      double dd;
      if (std::abs(yi - yj) < 1e-12) {
        dd = eig.values[i];
      } else {
        dd = (eig.values[i] - eig.values[j]) / (yi - yj);
      }
      vt(i, j) *= dd;
    }
  }
  MatrixXc integral = eig.vectors * vt * eig.vectors.adjoint();
  const double xv = trace_inner(x.matrix(), v_tau);
  return HermitianMatrix(-integral + xv * x.matrix().mat());
}

}  // namespace dxl

#include "tvflow/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvflow {

StepConstraintReport check_step_constraint(const SolverParams& params, const Mesh& mesh) {
  StepConstraintReport report;
  report.ratio = params.tau / (params.sigma * mesh.h);
  report.flagged = report.ratio > 1.0;
  return report;
}

DualField dual_update(const FeSpace& space, const DualField& lambda_prev,
                      const ScalarField& v_star, double dual_step) {
  if (!dual_feasible(lambda_prev))
    throw std::invalid_argument("dual_update: infeasible previous dual iterate");
  DualField g = grad_to_dual(space, v_star);
  g.values = lambda_prev.values + dual_step * g.values;
  return project_unit_ball(std::move(g));
}

DualField iteration_residual(const FeSpace& space, const DualField& lambda,
                             const DualField& lambda_prev, const ScalarField& v,
                             const ScalarField& v_prev, const ScalarField& v_prev2,
                             double dual_weight) {
  ScalarField ddv(space.mesh, v.coeffs - 2.0 * v_prev.coeffs + v_prev2.coeffs);
  DualField r = grad_to_dual(space, ddv);
  r.values = -dual_weight * (lambda.values - lambda_prev.values) - r.values;
  return r;
}

bool stopping_check(const FeSpace& space, const ScalarField& delta_v,
                    const DualField& r, const SolverParams& params) {
  if (params.c_stop_v <= 0.0 || params.c_stop_r <= 0.0)
    throw std::invalid_argument("stopping_check: stopping constants must be resolved");
  const double sv = l2_norm(space, delta_v) / params.tau;
  const double sr = dual_l1_norm(space, r);
  return sv <= params.c_stop_v * std::sqrt(params.dt) && sr <= params.c_stop_r * params.dt;
}

InnerSolver::InnerSolver(const FeSpace& space, const SolverParams& params,
                         const BoundaryCondition& bc)
    : space_(space), params_(params), bc_(bc) {
  if (!(params.dt > 0) || !(params.tau > 0) || !(params.sigma > 0))
    throw std::invalid_argument("solver: dt, tau, sigma must be positive");
  if (params.max_inner_iters < 1)
    throw std::invalid_argument("solver: max_inner_iters must be >= 1");

  const Mesh& mesh = *space.mesh;
  const Eigen::Index n = mesh.n_vertices();
  constrained_.assign(n, 0);
  dirichlet_values_ = Eigen::VectorXd::Zero(n);
  if (bc_.type == BoundaryCondition::Type::dirichlet) {
    if (!bc_.value) throw std::invalid_argument("solver: dirichlet bc without values");
    for (Eigen::Index v = 0; v < n; ++v)
      if (mesh.boundary_vertex[v]) {
        constrained_[v] = 1;
        dirichlet_values_[v] = bc_.value(mesh.vertices.row(v).transpose());
      }
  }

  const double scale = 1.0 / params.tau + 1.0 / params.dt;
  Eigen::SparseMatrix<double> full = (scale * space.mass).eval();

  // Symmetric elimination of constrained rows/columns; prescribed values
  // are folded into the right hand side at solve time.
  fold_ = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(full.nonZeros());
  for (int k = 0; k < full.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, k); it; ++it) {
      const Eigen::Index i = it.row(), j = it.col();
      if (constrained_[i] && constrained_[j]) {
        if (i == j) triplets.emplace_back(i, j, it.value());
        continue;
      }
      if (constrained_[j]) {
        fold_[i] += it.value() * dirichlet_values_[j];
        continue;
      }
      if (constrained_[i]) continue;
      triplets.emplace_back(i, j, it.value());
    }
  system_.resize(n, n);
  system_.setFromTriplets(triplets.begin(), triplets.end());
  system_.makeCompressed();
  system_diag_ = system_.diagonal();

  switch (params_.linear_solver) {
    case SolverParams::LinearSolver::cholesky:
      use_cholesky_ = true;
      break;
    case SolverParams::LinearSolver::conjugate_gradient:
      use_cholesky_ = false;
      break;
    case SolverParams::LinearSolver::automatic:
      use_cholesky_ = n <= 100000;
      break;
  }
  if (use_cholesky_) {
    cholesky_.compute(system_);
    if (cholesky_.info() != Eigen::Success)
      throw std::runtime_error("solver: Cholesky factorization failed");
  }
}

Eigen::VectorXd InnerSolver::solve_linear(const Eigen::VectorXd& rhs) const {
  if (use_cholesky_) return cholesky_.solve(rhs);
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(params_.linear_solver_tol);
  cg.compute(system_);
  const Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success)
    throw std::runtime_error("solver: conjugate gradient did not converge");
  return x;
}

ScalarField InnerSolver::primal_update(const ScalarField& v_prev, const DualField& lambda,
                                       const ScalarField& g) const {
  if (v_prev.mesh.get() != space_.mesh.get() || g.mesh.get() != space_.mesh.get() ||
      lambda.mesh.get() != space_.mesh.get())
    throw std::invalid_argument("primal_update: mesh mismatch");
  Eigen::VectorXd rhs = space_.mass * ((1.0 / params_.tau) * v_prev.coeffs +
                                       (1.0 / params_.dt) * g.coeffs);
  rhs -= apply_div_transpose(space_, lambda);
  if (bc_.type == BoundaryCondition::Type::dirichlet) {
    rhs -= fold_;
    for (Eigen::Index i = 0; i < rhs.size(); ++i)
      if (constrained_[i]) rhs[i] = system_diag_[i] * dirichlet_values_[i];
  }
  ScalarField v(space_.mesh, solve_linear(rhs));
  if (bc_.type == BoundaryCondition::Type::dirichlet)
    for (Eigen::Index i = 0; i < v.coeffs.size(); ++i)
      if (constrained_[i]) v.coeffs[i] = dirichlet_values_[i];
  return v;
}

InnerResult InnerSolver::solve(const ScalarField& g, const ScalarField& v0,
                               const DualField& lambda0, bool record_trace) const {
  if (!dual_feasible(lambda0))
    throw std::invalid_argument("inner solve: infeasible initial dual variable");

  SolverParams params = params_;
  const double g_norm = l2_norm(space_, g);
  if (params.c_stop_v <= 0) params.c_stop_v = 0.1 * std::max(1.0, g_norm);
  if (params.c_stop_r <= 0) params.c_stop_r = 0.1 * std::max(1.0, g_norm);

  InnerResult result;
  result.c_stop_v_eff = params.c_stop_v;
  result.c_stop_r_eff = params.c_stop_r;
  result.stop_v_threshold = params.c_stop_v * std::sqrt(params.dt);
  result.stop_r_threshold = params.c_stop_r * params.dt;

  // Dual ascent step tau/sigma, clamped into the stability region
  // s * tau * ||grad||^2 < 1 of the primal-dual coupling.
  const double dual_step =
      std::min(params.tau / params.sigma,
               0.8 / (params.tau * space_.grad_bound_sq));
  const double dual_weight = 1.0 / dual_step;
  ScalarField v = v0, v_prev = v0, v_prev2 = v0;
  DualField lambda = lambda0, lambda_prev = lambda0;

  for (int l = 0; l < params.max_inner_iters; ++l) {
    ScalarField v_star(space_.mesh,
                       l == 0 ? v0.coeffs : (2.0 * v.coeffs - v_prev.coeffs).eval());
    DualField lambda_new = dual_update(space_, lambda, v_star, dual_step);
    ScalarField v_new = primal_update(v, lambda_new, g);

    v_prev2 = std::move(v_prev);
    v_prev = std::move(v);
    v = std::move(v_new);
    lambda_prev = std::move(lambda);
    lambda = std::move(lambda_new);
    result.iters = l + 1;

    result.max_infeasibility =
        std::max(result.max_infeasibility, dual_sup_norm(lambda) - 1.0);

    const ScalarField delta_v(space_.mesh, v.coeffs - v_prev.coeffs);
    if (record_trace) {
      result.trace_delta_v.push_back(l2_norm(space_, delta_v));
      DualField dl{space_.mesh, lambda.values - lambda_prev.values};
      result.trace_delta_lambda.push_back(dual_norm_h(space_, dl));
    }

    // The second difference needs three genuine iterates; before that the
    // initial values pad the history and the test is skipped.
    if (l >= 2 || l + 1 == params.max_inner_iters) {
      result.residual = iteration_residual(space_, lambda, lambda_prev, v, v_prev,
                                           v_prev2, dual_weight);
      result.stop_v_value = l2_norm(space_, delta_v) / params.tau;
      result.stop_r_value = dual_l1_norm(space_, result.residual);
      if (l >= 2 && result.stop_v_value <= result.stop_v_threshold &&
          result.stop_r_value <= result.stop_r_threshold) {
        result.converged = true;
        break;
      }
    }
  }

  result.v = std::move(v);
  result.lambda = std::move(lambda);
  return result;
}

IterationHistory InnerSolver::run_fixed_iterations(const ScalarField& g,
                                                   const ScalarField& v0,
                                                   const DualField& lambda0,
                                                   int n_iters) const {
  if (!dual_feasible(lambda0))
    throw std::invalid_argument("inner solve: infeasible initial dual variable");
  IterationHistory history;
  history.v.reserve(n_iters);
  history.delta_lambda_h.reserve(n_iters);

  const double dual_step =
      std::min(params_.tau / params_.sigma,
               0.8 / (params_.tau * space_.grad_bound_sq));
  ScalarField v = v0, v_prev = v0;
  DualField lambda = lambda0;
  for (int l = 0; l < n_iters; ++l) {
    ScalarField v_star(space_.mesh,
                       l == 0 ? v0.coeffs : (2.0 * v.coeffs - v_prev.coeffs).eval());
    DualField lambda_new = dual_update(space_, lambda, v_star, dual_step);
    ScalarField v_new = primal_update(v, lambda_new, g);
    DualField dl{space_.mesh, lambda_new.values - lambda.values};
    history.delta_lambda_h.push_back(dual_norm_h(space_, dl));
    history.v.push_back(v_new.coeffs);
    v_prev = std::move(v);
    v = std::move(v_new);
    lambda = std::move(lambda_new);
  }
  return history;
}

}  // namespace tvflow

#pragma once

#include <Eigen/SparseCholesky>

#include <functional>
#include <vector>

#include "tvflow/dual.hpp"

namespace tvflow {

struct SolverParams {
  double dt = 0.1;     // outer time step
  double tau = 0.1;    // inner pseudo-time step
  double sigma = 0.1;  // dual step
  // Stopping constants; values <= 0 select the scale-aware default
  // 0.1 * max(1, ||g||_L2) per solve.
  double c_stop_v = 0.0;
  double c_stop_r = 0.0;
  int max_inner_iters = 100000;
  double linear_solver_tol = 1e-10;
  enum class LinearSolver { automatic, cholesky, conjugate_gradient };
  LinearSolver linear_solver = LinearSolver::automatic;
};

struct BoundaryCondition {
  enum class Type { neumann, dirichlet };
  Type type = Type::neumann;
  std::function<double(const Eigen::Vector2d&)> value;

  static BoundaryCondition neumann() { return {}; }
  static BoundaryCondition dirichlet(std::function<double(const Eigen::Vector2d&)> g) {
    return {Type::dirichlet, std::move(g)};
  }
  static BoundaryCondition dirichlet_zero() {
    return dirichlet([](const Eigen::Vector2d&) { return 0.0; });
  }
};

/// Advisory check of the inner-loop step-size condition tau <= sigma * h
/// (inverse-inequality constant taken as 1). Never aborts.
struct StepConstraintReport {
  double ratio = 0.0;  // tau / (sigma * h)
  bool flagged = false;
};
StepConstraintReport check_step_constraint(const SolverParams& params, const Mesh& mesh);

/// lambda <- P_ball(lambda_prev + dual_step * grad v_star): the exact
/// nodal solution of <-(1/dual_step) dlambda + grad v_star, q - lambda>_h
/// <= 0 over the feasible ball. The inner loop uses dual_step = sigma*tau.
DualField dual_update(const FeSpace& space, const DualField& lambda_prev,
                      const ScalarField& v_star, double dual_step);

/// Defect that makes the stopped dual inequality exact:
/// r = -dual_weight (lambda - lambda_prev) - grad(v - 2 v_prev + v_prev2),
/// with dual_weight the reciprocal of the dual step.
DualField iteration_residual(const FeSpace& space, const DualField& lambda,
                             const DualField& lambda_prev, const ScalarField& v,
                             const ScalarField& v_prev, const ScalarField& v_prev2,
                             double dual_weight);

/// Both stopping inequalities (closed): ||delta_v / tau||_L2 <= c_v dt^{1/2}
/// and ||r||_{L1,h} <= c_r dt. Requires explicit stopping constants.
bool stopping_check(const FeSpace& space, const ScalarField& delta_v,
                    const DualField& r, const SolverParams& params);

struct InnerResult {
  ScalarField v;
  DualField lambda;
  int iters = 0;
  DualField residual;
  double stop_v_value = 0.0;
  double stop_r_value = 0.0;
  double stop_v_threshold = 0.0;
  double stop_r_threshold = 0.0;
  double c_stop_v_eff = 0.0;
  double c_stop_r_eff = 0.0;
  bool converged = false;
  double max_infeasibility = 0.0;  // max over iterates of (sup|lambda| - 1)+
  // Optional per-iteration norms of the increments.
  std::vector<double> trace_delta_v;
  std::vector<double> trace_delta_lambda;
};

/// Per-iteration iterates of a fixed-length run, for convergence diagnostics.
struct IterationHistory {
  std::vector<Eigen::VectorXd> v;          // v^1 .. v^L
  std::vector<double> delta_lambda_h;      // ||delta lambda^{l+1}||_h
};

/// One implicit step solved by the primal-dual inner iteration. The system
/// matrix (1/tau + 1/dt) M is assembled and factored once at construction
/// (Cholesky up to 1e5 vertices, conjugate gradients beyond) and reused
/// across iterations and time steps.
class InnerSolver {
 public:
  InnerSolver(const FeSpace& space, const SolverParams& params,
              const BoundaryCondition& bc);

  /// Exact minimizer of the lambda-frozen quadratic (one linear solve).
  ScalarField primal_update(const ScalarField& v_prev, const DualField& lambda,
                            const ScalarField& g) const;

  /// Full inner loop from (v0, lambda0); stopping test evaluated from the
  /// third iterate on.
  InnerResult solve(const ScalarField& g, const ScalarField& v0,
                    const DualField& lambda0, bool record_trace = false) const;

  /// Runs exactly n_iters iterations with no stopping test.
  IterationHistory run_fixed_iterations(const ScalarField& g, const ScalarField& v0,
                                        const DualField& lambda0, int n_iters) const;

  const SolverParams& params() const { return params_; }
  const FeSpace& space() const { return space_; }

 private:
  Eigen::VectorXd solve_linear(const Eigen::VectorXd& rhs) const;

  const FeSpace& space_;
  SolverParams params_;
  BoundaryCondition bc_;
  bool use_cholesky_ = true;
  Eigen::SparseMatrix<double> system_;  // constrained matrix, column-major
  Eigen::VectorXd system_diag_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> cholesky_;
  std::vector<std::uint8_t> constrained_;
  Eigen::VectorXd dirichlet_values_;  // zero on free vertices
  Eigen::VectorXd fold_;              // column contribution of prescribed values
};

}  // namespace tvflow

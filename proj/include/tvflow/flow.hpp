#pragma once

#include <optional>
#include <vector>

#include "tvflow/solver.hpp"

namespace tvflow {

struct FlowConfig {
  double t_final = 1.0;
  BoundaryCondition bc;
  double ext_threshold = -1.0;  // < 0: 1e-3 * sup|u0|
  bool warm_start = true;
  int store_every = 1;  // 0: store only the initial and final fields
};

/// Time series of the implicit Euler flow. Arrays are aligned with the
/// step index k = 0..K; iteration statistics are zero at k = 0.
struct FlowTrace {
  std::vector<double> times;
  std::vector<double> energies;   // discrete TV of u^k
  std::vector<double> sup_norms;  // max |coeff|
  std::vector<double> delta_l2;   // ||u^k - u^{k-1}||_L2
  std::vector<int> inner_iters;
  std::vector<double> stop_v;
  std::vector<double> stop_r;
  std::vector<std::uint8_t> step_converged;
  std::vector<int> stored_steps;
  std::vector<Eigen::VectorXd> fields;

  std::optional<double> extinction_time;
  double ext_threshold_used = 0.0;
  double c_stop_v_eff = 0.0;  // max effective stopping constants over steps
  double c_stop_r_eff = 0.0;
  double max_infeasibility = 0.0;
  bool all_converged = true;

  int n_steps() const { return static_cast<int>(times.size()) - 1; }
  /// Index into `fields` for stored step k, or -1.
  int stored_index(int k) const;
};

/// Implicit Euler loop for the TV subgradient flow; each step is one
/// inner_solve with datum g = u^k. With warm_start the dual variable of
/// the previous step initializes the next inner loop.
FlowTrace run_flow(const FeSpace& space, const ScalarField& u0, const FlowConfig& config,
                   const SolverParams& params, const DualField* lambda_init = nullptr);

/// First recorded time with sup_norm <= threshold.
std::optional<double> detect_extinction(const FlowTrace& trace, double threshold);

/// Merge diagnostics for two-plateau (annulus) data: first time the
/// maximum over the inner disk |x| < r_inner matches the maximum over the
/// band r_inner < |x| < r_outer within tol, and that common value.
struct AnnulusDiagnostics {
  bool applicable = false;
  double t_merge = 0.0;
  double merge_value = 0.0;
};
AnnulusDiagnostics annulus_diagnostics(const FeSpace& space, const FlowTrace& trace,
                                       double r_inner, double r_outer, double tol);

// Time-series norms for sequences of per-step L2 norms.
double lp_time_norm(const std::vector<double>& step_norms, double dt, double p);
double linf_time_norm(const std::vector<double>& step_norms);
/// Square root of the summed squared increments.
double h_half_norm(const std::vector<double>& increment_norms);

/// Piecewise-linear-in-time interpolant of the stored fields at time t.
/// Requires store_every == 1.
Eigen::VectorXd rothe_eval(const FlowTrace& trace, double t);

}  // namespace tvflow

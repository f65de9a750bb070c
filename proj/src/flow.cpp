#include "tvflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvflow {

int FlowTrace::stored_index(int k) const {
  const auto it = std::lower_bound(stored_steps.begin(), stored_steps.end(), k);
  if (it == stored_steps.end() || *it != k) return -1;
  return static_cast<int>(it - stored_steps.begin());
}

FlowTrace run_flow(const FeSpace& space, const ScalarField& u0, const FlowConfig& config,
                   const SolverParams& params, const DualField* lambda_init) {
  if (u0.mesh.get() != space.mesh.get())
    throw std::invalid_argument("run_flow: initial field does not match the space");
  if (!(config.t_final > 0)) throw std::invalid_argument("run_flow: t_final must be positive");
  if (!u0.coeffs.allFinite())
    throw std::invalid_argument("run_flow: non-finite initial data");

  if (config.bc.type == BoundaryCondition::Type::dirichlet) {
    const Mesh& mesh = *space.mesh;
    const double scale = std::max(1.0, u0.coeffs.cwiseAbs().maxCoeff());
    for (Eigen::Index v = 0; v < mesh.n_vertices(); ++v)
      if (mesh.boundary_vertex[v]) {
        const double g = config.bc.value(mesh.vertices.row(v).transpose());
        if (std::abs(u0.coeffs[v] - g) > 1e-12 * scale)
          throw std::invalid_argument(
              "run_flow: initial data incompatible with dirichlet boundary values");
      }
  }

  const int n_steps = static_cast<int>(std::ceil(config.t_final / params.dt - 1e-12));
  const double sup0 = u0.coeffs.size() ? u0.coeffs.cwiseAbs().maxCoeff() : 0.0;
  const double threshold =
      config.ext_threshold >= 0 ? config.ext_threshold : 1e-3 * sup0;

  InnerSolver solver(space, params, config.bc);

  FlowTrace trace;
  trace.ext_threshold_used = threshold;
  const auto record = [&](int k, double t, const ScalarField& u) {
    trace.times.push_back(t);
    trace.energies.push_back(discrete_tv_energy(space, u));
    trace.sup_norms.push_back(u.coeffs.size() ? u.coeffs.cwiseAbs().maxCoeff() : 0.0);
    const bool store = config.store_every > 0
                           ? (k % config.store_every == 0 || k == n_steps)
                           : (k == 0 || k == n_steps);
    if (store) {
      trace.stored_steps.push_back(k);
      trace.fields.push_back(u.coeffs);
    }
  };

  ScalarField u = u0;
  record(0, 0.0, u);
  trace.delta_l2.push_back(0.0);
  trace.inner_iters.push_back(0);
  trace.stop_v.push_back(0.0);
  trace.stop_r.push_back(0.0);
  trace.step_converged.push_back(1);

  DualField lambda = lambda_init ? *lambda_init : zero_dual(space);
  for (int k = 1; k <= n_steps; ++k) {
    InnerResult inner = solver.solve(u, u, lambda);
    lambda = config.warm_start ? inner.lambda : zero_dual(space);

    trace.delta_l2.push_back(
        l2_norm(space, ScalarField(space.mesh, inner.v.coeffs - u.coeffs)));
    u = std::move(inner.v);
    record(k, k * params.dt, u);
    trace.inner_iters.push_back(inner.iters);
    trace.stop_v.push_back(inner.stop_v_value);
    trace.stop_r.push_back(inner.stop_r_value);
    trace.step_converged.push_back(inner.converged ? 1 : 0);
    trace.all_converged = trace.all_converged && inner.converged;
    trace.c_stop_v_eff = std::max(trace.c_stop_v_eff, inner.c_stop_v_eff);
    trace.c_stop_r_eff = std::max(trace.c_stop_r_eff, inner.c_stop_r_eff);
    trace.max_infeasibility = std::max(trace.max_infeasibility, inner.max_infeasibility);
  }

  trace.extinction_time = detect_extinction(trace, threshold);
  return trace;
}

std::optional<double> detect_extinction(const FlowTrace& trace, double threshold) {
  for (std::size_t k = 0; k < trace.times.size(); ++k)
    if (trace.sup_norms[k] <= threshold) return trace.times[k];
  return std::nullopt;
}

AnnulusDiagnostics annulus_diagnostics(const FeSpace& space, const FlowTrace& trace,
                                       double r_inner, double r_outer, double tol) {
  AnnulusDiagnostics out;
  const Mesh& mesh = *space.mesh;
  std::vector<Eigen::Index> inner, band;
  for (Eigen::Index v = 0; v < mesh.n_vertices(); ++v) {
    const double r = mesh.vertices.row(v).norm();
    if (r < r_inner)
      inner.push_back(v);
    else if (r > r_inner && r < r_outer)
      band.push_back(v);
  }
  if (inner.empty() || band.empty()) return out;

  const auto max_over = [&](const Eigen::VectorXd& u, const std::vector<Eigen::Index>& set) {
    double m = -std::numeric_limits<double>::infinity();
    for (const Eigen::Index v : set) m = std::max(m, u[v]);
    return m;
  };

  for (std::size_t s = 0; s < trace.fields.size(); ++s) {
    const double mi = max_over(trace.fields[s], inner);
    const double mb = max_over(trace.fields[s], band);
    if (std::abs(mi - mb) <= tol) {
      // A trace already merged at the start carries no merge event.
      if (s == 0) return out;
      out.applicable = true;
      out.t_merge = trace.times[trace.stored_steps[s]];
      out.merge_value = std::max(mi, mb);
      return out;
    }
  }
  return out;
}

double lp_time_norm(const std::vector<double>& step_norms, double dt, double p) {
  if (std::isinf(p)) return linf_time_norm(step_norms);
  double sum = 0.0;
  for (const double v : step_norms) sum += std::pow(std::abs(v), p);
  return std::pow(dt * sum, 1.0 / p);
}

double linf_time_norm(const std::vector<double>& step_norms) {
  double m = 0.0;
  for (const double v : step_norms) m = std::max(m, std::abs(v));
  return m;
}

double h_half_norm(const std::vector<double>& increment_norms) {
  double sum = 0.0;
  for (const double v : increment_norms) sum += v * v;
  return std::sqrt(sum);
}

Eigen::VectorXd rothe_eval(const FlowTrace& trace, double t) {
  if (trace.fields.size() != trace.times.size())
    throw std::invalid_argument("rothe_eval: trace must store every step");
  if (trace.times.empty()) throw std::invalid_argument("rothe_eval: empty trace");
  if (t <= trace.times.front()) return trace.fields.front();
  if (t >= trace.times.back()) return trace.fields.back();
  const auto it = std::upper_bound(trace.times.begin(), trace.times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - trace.times.begin()) - 1;
  const double t0 = trace.times[k], t1 = trace.times[k + 1];
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * trace.fields[k] + w * trace.fields[k + 1];
}

}  // namespace tvflow

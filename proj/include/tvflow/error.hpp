#pragma once

#include <functional>

#include "tvflow/exact.hpp"
#include "tvflow/flow.hpp"

namespace tvflow {

/// Integrates f over the mesh with a 4-per-axis uniform subdivision of each
/// cell and a degree-4 Gauss rule per sub-cell (Dunavant on triangles). The
/// integrand receives the owning cell index and the global point.
double integrate_on_mesh(
    const Mesh& mesh,
    const std::function<double(Eigen::Index, const Eigen::Vector2d&)>& f,
    int subdivisions = 4);

/// || u_h - f ||_L2 with the subdivided quadrature above.
double l2_distance_to(const Mesh& mesh, const Eigen::VectorXd& coeffs,
                      const std::function<double(const Eigen::Vector2d&)>& f,
                      int subdivisions = 4);

/// Reference evaluation of the exact total variation of the discrete field,
/// integral of |grad u_h|, with the subdivided quadrature.
double refined_tv(const Mesh& mesh, const Eigen::VectorXd& coeffs,
                  int subdivisions = 4);

/// Max over stored steps of the L2 distance between u_h^k and u(., t^k).
double error_linf_l2(const FeSpace& space, const FlowTrace& trace,
                     const ExactSolution& sol);

struct ErrorReport {
  std::vector<double> hs;
  std::vector<double> errors;
  std::vector<double> orders;  // orders[i] between level i and i+1
  double mean_order = 0.0;
};

/// Observed orders log2(e_i / e_{i+1}) for consecutive mesh halvings.
ErrorReport eoc_table(const std::vector<double>& hs, const std::vector<double>& errors);

}  // namespace tvflow

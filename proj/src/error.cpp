#include "tvflow/error.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace tvflow {

namespace {

struct Gauss1d {
  std::array<double, 4> x;  // nodes on (0, 1)
  std::array<double, 4> w;  // weights summing to 1
};

Gauss1d gauss4() {
  const double a = 0.3399810435848563, b = 0.8611363115940526;
  const double wa = 0.6521451548625461, wb = 0.3478548451374538;
  Gauss1d g;
  g.x = {0.5 * (1 - b), 0.5 * (1 - a), 0.5 * (1 + a), 0.5 * (1 + b)};
  g.w = {0.5 * wb, 0.5 * wa, 0.5 * wa, 0.5 * wb};
  return g;
}

struct TriRule {
  std::array<std::array<double, 3>, 6> bary;
  std::array<double, 6> w;  // weights summing to 1
};

// Degree-4 six-point rule in barycentric coordinates.
TriRule tri_rule() {
  const double a1 = 0.816847572980459, b1 = 0.091576213509771;
  const double a2 = 0.108103018168070, b2 = 0.445948490915965;
  const double w1 = 0.109951743655322, w2 = 0.223381589678011;
  TriRule r;
  r.bary = {{{a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
             {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}};
  r.w = {w1, w1, w1, w2, w2, w2};
  return r;
}

}  // namespace

double integrate_on_mesh(
    const Mesh& mesh,
    const std::function<double(Eigen::Index, const Eigen::Vector2d&)>& f,
    int subdivisions) {
  const int s = subdivisions;
  const Gauss1d g = gauss4();
  double total = 0.0;

  if (mesh.kind == CellKind::interval) {
    const double dx = mesh.spacing.x();
    const double sub = dx / s;
    for (Eigen::Index c = 0; c < mesh.n_cells(); ++c) {
      const double x0 = mesh.vertices(mesh.cells(c, 0), 0);
      double acc = 0.0;
      for (int i = 0; i < s; ++i)
        for (int k = 0; k < 4; ++k)
          acc += g.w[k] * f(c, {x0 + (i + g.x[k]) * sub, 0.0});
      total += acc * sub;
    }
    return total;
  }

  if (mesh.kind == CellKind::quad) {
    const double sx = mesh.spacing.x() / s, sy = mesh.spacing.y() / s;
    for (Eigen::Index c = 0; c < mesh.n_cells(); ++c) {
      const Eigen::Vector2d origin = mesh.vertices.row(mesh.cells(c, 0)).transpose();
      double acc = 0.0;
      for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i)
          for (int ky = 0; ky < 4; ++ky)
            for (int kx = 0; kx < 4; ++kx) {
              const Eigen::Vector2d x(origin.x() + (i + g.x[kx]) * sx,
                                      origin.y() + (j + g.x[ky]) * sy);
              acc += g.w[kx] * g.w[ky] * f(c, x);
            }
      total += acc * sx * sy;
    }
    return total;
  }

  // Triangles: split into s^2 congruent sub-triangles aligned with the cell.
  const TriRule rule = tri_rule();
  for (Eigen::Index c = 0; c < mesh.n_cells(); ++c) {
    const Eigen::Vector2d p0 = mesh.vertices.row(mesh.cells(c, 0)).transpose();
    const Eigen::Vector2d p1 = mesh.vertices.row(mesh.cells(c, 1)).transpose();
    const Eigen::Vector2d p2 = mesh.vertices.row(mesh.cells(c, 2)).transpose();
    const Eigen::Vector2d u = (p1 - p0) / s, v = (p2 - p0) / s;
    const double sub_area = mesh.cell_measure() / (s * s);
    double acc = 0.0;
    const auto add_triangle = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                  const Eigen::Vector2d& d) {
      for (int k = 0; k < 6; ++k) {
        const auto& bc = rule.bary[k];
        acc += rule.w[k] * f(c, bc[0] * a + bc[1] * b + bc[2] * d);
      }
    };
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s - i; ++j) {
        const Eigen::Vector2d a = p0 + i * u + j * v;
        add_triangle(a, a + u, a + v);
        if (i + j < s - 1) add_triangle(a + u, a + u + v, a + v);
      }
    total += acc * sub_area;
  }
  return total;
}

double l2_distance_to(const Mesh& mesh, const Eigen::VectorXd& coeffs,
                      const std::function<double(const Eigen::Vector2d&)>& f,
                      int subdivisions) {
  const double sq = integrate_on_mesh(
      mesh,
      [&](Eigen::Index, const Eigen::Vector2d& x) {
        const double d = eval_field(mesh, coeffs, x) - f(x);
        return d * d;
      },
      subdivisions);
  return std::sqrt(std::max(sq, 0.0));
}

double refined_tv(const Mesh& mesh, const Eigen::VectorXd& coeffs, int subdivisions) {
  return integrate_on_mesh(
      mesh,
      [&](Eigen::Index, const Eigen::Vector2d& x) {
        return eval_field_gradient(mesh, coeffs, x).head(mesh.dim).norm();
      },
      subdivisions);
}

double error_linf_l2(const FeSpace& space, const FlowTrace& trace,
                     const ExactSolution& sol) {
  if (trace.fields.empty())
    throw std::invalid_argument("error_linf_l2: trace stores no fields");
  const Mesh& mesh = *space.mesh;
  double worst = 0.0;
  for (std::size_t s = 0; s < trace.fields.size(); ++s) {
    const double t = trace.times[trace.stored_steps[s]];
    const double err = l2_distance_to(
        mesh, trace.fields[s], [&](const Eigen::Vector2d& x) { return sol.eval(x, t); });
    worst = std::max(worst, err);
  }
  return worst;
}

ErrorReport eoc_table(const std::vector<double>& hs, const std::vector<double>& errors) {
  if (hs.size() != errors.size())
    throw std::invalid_argument("eoc_table: size mismatch");
  ErrorReport report;
  report.hs = hs;
  report.errors = errors;
  for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
    const double order =
        std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]);
    report.orders.push_back(order);
  }
  if (!report.orders.empty()) {
    double sum = 0.0;
    for (const double o : report.orders) sum += o;
    report.mean_order = sum / static_cast<double>(report.orders.size());
  }
  return report;
}

}  // namespace tvflow

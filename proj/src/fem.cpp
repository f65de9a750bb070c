#include "tvflow/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tvflow {

QuadratureRule quadrature_weights(CellKind kind) {
  QuadratureRule rule;
  rule.kind = kind;
  switch (kind) {
    case CellKind::interval:
      rule.weights = Eigen::VectorXd::Constant(2, 0.5);
      break;
    case CellKind::quad:
      rule.weights = Eigen::VectorXd::Constant(4, 0.25);
      break;
    case CellKind::triangle:
      rule.weights = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
      break;
  }
  return rule;
}

ScalarField lagrange_interpolate(std::shared_ptr<const Mesh> mesh,
                                 const std::function<double(const Eigen::Vector2d&)>& f) {
  ScalarField out(mesh);
  for (Eigen::Index v = 0; v < mesh->n_vertices(); ++v) {
    const double value = f(mesh->vertices.row(v).transpose());
    if (!std::isfinite(value))
      throw std::invalid_argument("lagrange_interpolate: non-finite value at a vertex");
    out.coeffs[v] = value;
  }
  return out;
}

namespace {

Eigen::MatrixXd local_mass_matrix(const Mesh& mesh) {
  const double dx = mesh.spacing.x();
  const double dy = mesh.spacing.y();
  switch (mesh.kind) {
    case CellKind::interval: {
      Eigen::Matrix2d m;
      m << 2, 1, 1, 2;
      return (dx / 6.0) * m;
    }
    case CellKind::quad: {
      Eigen::Matrix2d mx, my;
      mx << 2, 1, 1, 2;
      my = mx;
      mx *= dx / 6.0;
      my *= dy / 6.0;
      Eigen::MatrixXd m(4, 4);
      for (int iy = 0; iy < 2; ++iy)
        for (int ix = 0; ix < 2; ++ix)
          for (int jy = 0; jy < 2; ++jy)
            for (int jx = 0; jx < 2; ++jx)
              m(iy * 2 + ix, jy * 2 + jx) = mx(ix, jx) * my(iy, jy);
      return m;
    }
    case CellKind::triangle: {
      Eigen::Matrix3d m;
      m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
      return (0.5 * dx * dy / 12.0) * m;
    }
  }
  return {};
}

}  // namespace

SparseRM assemble_mass_matrix(const Mesh& mesh) {
  const Eigen::MatrixXd local = local_mass_matrix(mesh);
  const int nt = mesh.verts_per_cell();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.n_cells()) * nt * nt);
  for (Eigen::Index c = 0; c < mesh.n_cells(); ++c)
    for (int a = 0; a < nt; ++a)
      for (int b = 0; b < nt; ++b)
        triplets.emplace_back(mesh.cells(c, a), mesh.cells(c, b), local(a, b));
  SparseRM m(mesh.n_vertices(), mesh.n_vertices());
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

std::array<std::vector<Eigen::MatrixXd>, 2> basis_gradient_tables(const Mesh& mesh) {
  const double dx = mesh.spacing.x();
  const double dy = mesh.spacing.y();
  std::array<std::vector<Eigen::MatrixXd>, 2> tables;
  switch (mesh.kind) {
    case CellKind::interval: {
      Eigen::MatrixXd g(2, 1);
      g << -1.0 / dx, 1.0 / dx;
      tables[0] = {g, g};
      break;
    }
    case CellKind::quad: {
      // Corners in local lexicographic order: (0,0), (1,0), (0,1), (1,1).
      tables[0].resize(4);
      for (int j = 0; j < 4; ++j) {
        const double xi = static_cast<double>(j % 2);
        const double eta = static_cast<double>(j / 2);
        Eigen::MatrixXd g(4, 2);
        g(0, 0) = -(1 - eta) / dx;  g(0, 1) = -(1 - xi) / dy;
        g(1, 0) = (1 - eta) / dx;   g(1, 1) = -xi / dy;
        g(2, 0) = -eta / dx;        g(2, 1) = (1 - xi) / dy;
        g(3, 0) = eta / dx;         g(3, 1) = xi / dy;
        tables[0][j] = g;
      }
      break;
    }
    case CellKind::triangle: {
      // Lower triangle (0,0)-(dx,0)-(dx,dy); upper (0,0)-(dx,dy)-(0,dy).
      Eigen::MatrixXd lower(3, 2), upper(3, 2);
      lower << -1.0 / dx, 0.0,
                1.0 / dx, -1.0 / dy,
                0.0, 1.0 / dy;
      upper << 0.0, -1.0 / dy,
               1.0 / dx, 0.0,
              -1.0 / dx, 1.0 / dy;
      tables[0] = {lower, lower, lower};
      tables[1] = {upper, upper, upper};
      break;
    }
  }
  return tables;
}

Eigen::MatrixXd cell_vertex_gradients(const ScalarField& field, Eigen::Index cell) {
  const Mesh& mesh = *field.mesh;
  if (cell < 0 || cell >= mesh.n_cells())
    throw std::out_of_range("cell_vertex_gradients: invalid cell index");
  const auto tables = basis_gradient_tables(mesh);
  const bool upper = mesh.kind == CellKind::triangle && (cell % 2) == 1;
  const auto& table = tables[upper ? 1 : 0];
  const int nt = mesh.verts_per_cell();
  Eigen::MatrixXd grads(nt, mesh.dim);
  Eigen::VectorXd local(nt);
  for (int a = 0; a < nt; ++a) local[a] = field.coeffs[mesh.cells(cell, a)];
  for (int j = 0; j < nt; ++j)
    grads.row(j) = (table[j].transpose() * local).transpose();
  return grads;
}

FeSpace build_fe_space(std::shared_ptr<const Mesh> mesh) {
  FeSpace space;
  space.mesh = mesh;
  space.mass = assemble_mass_matrix(*mesh);
  space.rule = quadrature_weights(mesh->kind);

  const int nt = mesh->verts_per_cell();
  const Eigen::Index n_dual = mesh->n_cells() * nt;
  space.n_dual_nodes = n_dual;

  const double measure = mesh->cell_measure();
  space.dual_weights.resize(n_dual);
  for (Eigen::Index c = 0; c < mesh->n_cells(); ++c)
    for (int j = 0; j < nt; ++j)
      space.dual_weights[c * nt + j] = measure * space.rule.weights[j];

  const auto tables = basis_gradient_tables(*mesh);
  for (int comp = 0; comp < mesh->dim; ++comp) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n_dual) * nt);
    for (Eigen::Index c = 0; c < mesh->n_cells(); ++c) {
      const bool upper = mesh->kind == CellKind::triangle && (c % 2) == 1;
      const auto& table = tables[upper ? 1 : 0];
      for (int j = 0; j < nt; ++j) {
        const Eigen::Index row = c * nt + j;
        for (int a = 0; a < nt; ++a)
          triplets.emplace_back(row, mesh->cells(c, a), table[j](a, comp));
      }
    }
    SparseRM g(n_dual, mesh->n_vertices());
    g.setFromTriplets(triplets.begin(), triplets.end());
    g.makeCompressed();
    space.grad[comp] = std::move(g);
  }

  // Cell-local generalized eigenbound: the global Rayleigh quotient of the
  // quadrature stiffness against the mass never exceeds the cell maximum.
  {
    const Eigen::MatrixXd mass_local = local_mass_matrix(*mesh);
    double bound = 0.0;
    const int orientations = mesh->kind == CellKind::triangle ? 2 : 1;
    for (int o = 0; o < orientations; ++o) {
      Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(nt, nt);
      for (int j = 0; j < nt; ++j)
        stiff += measure * space.rule.weights[j] * tables[o][j] *
                 tables[o][j].transpose();
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(stiff, mass_local);
      bound = std::max(bound, eig.eigenvalues().maxCoeff());
    }
    space.grad_bound_sq = bound;
  }
  return space;
}

namespace {

void require_same_mesh(const FeSpace& space, const ScalarField& a, const ScalarField& b) {
  if (a.mesh.get() != space.mesh.get() || b.mesh.get() != space.mesh.get())
    throw std::invalid_argument("field does not live on the space's mesh");
}

}  // namespace

double l2_inner(const FeSpace& space, const ScalarField& a, const ScalarField& b) {
  require_same_mesh(space, a, b);
  return a.coeffs.dot(space.mass * b.coeffs);
}

double l2_norm(const FeSpace& space, const ScalarField& a) {
  const double s = l2_inner(space, a, a);
  return std::sqrt(std::max(s, 0.0));
}

double mass_mean(const FeSpace& space, const ScalarField& a) {
  if (a.mesh.get() != space.mesh.get())
    throw std::invalid_argument("field does not live on the space's mesh");
  const Eigen::VectorXd row_sums = space.mass * Eigen::VectorXd::Ones(a.coeffs.size());
  return row_sums.dot(a.coeffs) / space.mesh->domain.measure();
}

namespace {

struct LocalCoords {
  Eigen::Index cell;
  double xi, eta;  // unit-square coordinates of x within its grid square
};

LocalCoords locate(const Mesh& mesh, const Eigen::Vector2d& x) {
  LocalCoords lc;
  lc.cell = mesh.cell_containing(x);
  const Eigen::Index square =
      mesh.kind == CellKind::triangle ? lc.cell / 2 : lc.cell;
  const int nx = mesh.cells_per_axis[0];
  const Eigen::Index ix = mesh.dim == 1 ? square : square % nx;
  const Eigen::Index iy = mesh.dim == 1 ? 0 : square / nx;
  lc.xi = (x.x() - (mesh.domain.lo.x() + ix * mesh.spacing.x())) / mesh.spacing.x();
  lc.xi = std::clamp(lc.xi, 0.0, 1.0);
  lc.eta = 0.0;
  if (mesh.dim == 2) {
    lc.eta = (x.y() - (mesh.domain.lo.y() + iy * mesh.spacing.y())) / mesh.spacing.y();
    lc.eta = std::clamp(lc.eta, 0.0, 1.0);
  }
  return lc;
}

}  // namespace

double eval_field(const Mesh& mesh, const Eigen::VectorXd& coeffs,
                  const Eigen::Vector2d& x) {
  const LocalCoords lc = locate(mesh, x);
  const auto v = [&](int a) { return coeffs[mesh.cells(lc.cell, a)]; };
  switch (mesh.kind) {
    case CellKind::interval:
      return v(0) * (1 - lc.xi) + v(1) * lc.xi;
    case CellKind::quad:
      return v(0) * (1 - lc.xi) * (1 - lc.eta) + v(1) * lc.xi * (1 - lc.eta) +
             v(2) * (1 - lc.xi) * lc.eta + v(3) * lc.xi * lc.eta;
    case CellKind::triangle: {
      if (lc.cell % 2 == 0)  // lower: vertices (0,0), (1,0), (1,1)
        return v(0) * (1 - lc.xi) + v(1) * (lc.xi - lc.eta) + v(2) * lc.eta;
      // upper: vertices (0,0), (1,1), (0,1)
      return v(0) * (1 - lc.eta) + v(1) * lc.xi + v(2) * (lc.eta - lc.xi);
    }
  }
  return 0.0;
}

Eigen::Vector2d eval_field_gradient(const Mesh& mesh, const Eigen::VectorXd& coeffs,
                                    const Eigen::Vector2d& x) {
  const LocalCoords lc = locate(mesh, x);
  const auto v = [&](int a) { return coeffs[mesh.cells(lc.cell, a)]; };
  const double dx = mesh.spacing.x();
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  switch (mesh.kind) {
    case CellKind::interval:
      g.x() = (v(1) - v(0)) / dx;
      return g;
    case CellKind::quad: {
      const double dy = mesh.spacing.y();
      g.x() = ((v(1) - v(0)) * (1 - lc.eta) + (v(3) - v(2)) * lc.eta) / dx;
      g.y() = ((v(2) - v(0)) * (1 - lc.xi) + (v(3) - v(1)) * lc.xi) / dy;
      return g;
    }
    case CellKind::triangle: {
      const double dy = mesh.spacing.y();
      if (lc.cell % 2 == 0) {
        g.x() = (v(1) - v(0)) / dx;
        g.y() = (v(2) - v(1)) / dy;
      } else {
        g.x() = (v(1) - v(2)) / dx;
        g.y() = (v(2) - v(0)) / dy;
      }
      return g;
    }
  }
  return g;
}

}  // namespace tvflow

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <memory>

#include "tvflow/mesh.hpp"

namespace tvflow {

using SparseRM = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Continuous piecewise P1/Q1 function, one coefficient per mesh vertex.
struct ScalarField {
  std::shared_ptr<const Mesh> mesh;
  Eigen::VectorXd coeffs;

  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const Mesh> m)
      : mesh(std::move(m)), coeffs(Eigen::VectorXd::Zero(mesh->n_vertices())) {}
  ScalarField(std::shared_ptr<const Mesh> m, Eigen::VectorXd c)
      : mesh(std::move(m)), coeffs(std::move(c)) {}
};

/// Vertex quadrature rule: weights are |T|^{-1} * integral of the nodal
/// basis function, so they are dimensionless and sum to one.
struct QuadratureRule {
  CellKind kind = CellKind::interval;
  Eigen::VectorXd weights;
};

QuadratureRule quadrature_weights(CellKind kind);

/// Nodal interpolant: coeffs[i] = f(vertex_i). Throws on non-finite values.
ScalarField lagrange_interpolate(std::shared_ptr<const Mesh> mesh,
                                 const std::function<double(const Eigen::Vector2d&)>& f);

/// Exact L2 mass matrix of the P1/Q1 basis, compressed sparse row.
/// Per-cell contributions are accumulated in a fixed cell order.
SparseRM assemble_mass_matrix(const Mesh& mesh);

/// Gradient of the local basis functions at the cell's own vertices.
/// Element (a, c) of table[j] is the x_c-derivative of basis a at local
/// vertex j. Uniform meshes share one table per cell orientation.
std::array<std::vector<Eigen::MatrixXd>, 2> basis_gradient_tables(const Mesh& mesh);

/// Gradient of `field` restricted to one cell, evaluated at the cell's
/// vertices; row j holds the d-vector at local vertex j. Constant rows
/// for P1 cells, corner values of the bilinear gradient for Q1.
Eigen::MatrixXd cell_vertex_gradients(const ScalarField& field, Eigen::Index cell);

/// Operators assembled once per mesh: mass matrix, vertex quadrature, and
/// the per-component gradient maps from vertex coefficients to values at
/// the (cell, local vertex) nodes of the discontinuous dual space.
struct FeSpace {
  std::shared_ptr<const Mesh> mesh;
  SparseRM mass;
  QuadratureRule rule;
  std::array<SparseRM, 2> grad;   // grad[c]: (n_dual_nodes x n_vertices)
  Eigen::VectorXd dual_weights;   // |T| * omega_j per dual node, cell-major
  Eigen::Index n_dual_nodes = 0;
  // Upper bound on sup ||grad w||_h^2 / ||w||_L2^2 over the space (max
  // cell-local eigenvalue of the quadrature stiffness against the mass).
  double grad_bound_sq = 0.0;

  int dim() const { return mesh->dim; }
};

FeSpace build_fe_space(std::shared_ptr<const Mesh> mesh);

double l2_inner(const FeSpace& space, const ScalarField& a, const ScalarField& b);
double l2_norm(const FeSpace& space, const ScalarField& a);
/// Mass-weighted mean: <a, 1> / |Omega|.
double mass_mean(const FeSpace& space, const ScalarField& a);

/// Point evaluation of the piecewise P1/Q1 interpolant.
double eval_field(const Mesh& mesh, const Eigen::VectorXd& coeffs,
                  const Eigen::Vector2d& x);
/// Gradient of the interpolant at a point (constant per P1 cell, bilinear
/// within Q1 cells).
Eigen::Vector2d eval_field_gradient(const Mesh& mesh, const Eigen::VectorXd& coeffs,
                                    const Eigen::Vector2d& x);

}  // namespace tvflow

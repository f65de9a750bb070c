#include "tvflow/dual.hpp"

#include <cmath>
#include <stdexcept>

namespace tvflow {

namespace {

void require_space_mesh(const FeSpace& space, const DualField& q) {
  if (q.mesh.get() != space.mesh.get())
    throw std::invalid_argument("dual field does not live on the space's mesh");
}

Eigen::VectorXd nodal_magnitudes(const DualField& q) {
  return q.values.rowwise().norm();
}

}  // namespace

DualField zero_dual(const FeSpace& space) {
  return {space.mesh, Eigen::MatrixXd::Zero(space.n_dual_nodes, space.dim())};
}

DualField dual_from_function(
    const FeSpace& space,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f) {
  const Mesh& mesh = *space.mesh;
  const int nt = mesh.verts_per_cell();
  DualField q = zero_dual(space);
  for (Eigen::Index c = 0; c < mesh.n_cells(); ++c)
    for (int j = 0; j < nt; ++j) {
      const Eigen::Vector2d x = mesh.vertices.row(mesh.cells(c, j)).transpose();
      q.values.row(c * nt + j) = f(x).head(mesh.dim).transpose();
    }
  return q;
}

DualField grad_to_dual(const FeSpace& space, const ScalarField& w) {
  if (w.mesh.get() != space.mesh.get())
    throw std::invalid_argument("field does not live on the space's mesh");
  DualField q{space.mesh, Eigen::MatrixXd(space.n_dual_nodes, space.dim())};
  for (int c = 0; c < space.dim(); ++c) q.values.col(c) = space.grad[c] * w.coeffs;
  return q;
}

double discrete_tv_energy(const FeSpace& space, const ScalarField& w) {
  const DualField g = grad_to_dual(space, w);
  return nodal_magnitudes(g).dot(space.dual_weights);
}

double inner_h(const FeSpace& space, const DualField& p, const DualField& q) {
  require_space_mesh(space, p);
  require_space_mesh(space, q);
  const Eigen::VectorXd dots = (p.values.array() * q.values.array()).rowwise().sum();
  return dots.dot(space.dual_weights);
}

double dual_norm_h(const FeSpace& space, const DualField& q) {
  return std::sqrt(std::max(inner_h(space, q, q), 0.0));
}

double dual_pairing(const FeSpace& space, const DualField& q, const ScalarField& w) {
  return inner_h(space, q, grad_to_dual(space, w));
}

Eigen::VectorXd apply_div_transpose(const FeSpace& space, const DualField& q) {
  require_space_mesh(space, q);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.mesh->n_vertices());
  for (int c = 0; c < space.dim(); ++c)
    b += space.grad[c].transpose() *
         (space.dual_weights.array() * q.values.col(c).array()).matrix();
  return b;
}

DualField project_unit_ball(DualField q) {
  const Eigen::VectorXd mags = nodal_magnitudes(q);
  const Eigen::ArrayXd scale = 1.0 / mags.array().max(1.0);
  q.values.array().colwise() *= scale;
  return q;
}

DualField normalized(DualField q) {
  const Eigen::VectorXd mags = nodal_magnitudes(q);
  const Eigen::ArrayXd scale =
      (mags.array() > 0.0).select(1.0 / mags.array().max(1e-300), 0.0);
  q.values.array().colwise() *= scale;
  return q;
}

double dual_sup_norm(const DualField& q) {
  if (q.values.rows() == 0) return 0.0;
  return nodal_magnitudes(q).maxCoeff();
}

double dual_l1_norm(const FeSpace& space, const DualField& q) {
  require_space_mesh(space, q);
  return nodal_magnitudes(q).dot(space.dual_weights);
}

bool dual_feasible(const DualField& q, double tol) {
  return dual_sup_norm(q) <= 1.0 + tol;
}

}  // namespace tvflow

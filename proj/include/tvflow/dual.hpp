#pragma once

#include <functional>

#include "tvflow/fem.hpp"

namespace tvflow {

/// Element of the discontinuous dual space: one d-vector per (cell, local
/// vertex) pair, stored cell-major (row = cell * verts_per_cell + j).
struct DualField {
  std::shared_ptr<const Mesh> mesh;
  Eigen::MatrixXd values;  // n_dual_nodes x dim

  DualField() = default;
  DualField(std::shared_ptr<const Mesh> m, Eigen::MatrixXd v)
      : mesh(std::move(m)), values(std::move(v)) {}
};

DualField zero_dual(const FeSpace& space);

/// Samples a vector-valued function at every (cell, local vertex) node.
DualField dual_from_function(
    const FeSpace& space,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f);

/// Cellwise vertex gradients of w as a dual-space element.
DualField grad_to_dual(const FeSpace& space, const ScalarField& w);

/// Nodal-quadrature total variation: sum_T |T| sum_j omega_j |grad w|(z_j).
double discrete_tv_energy(const FeSpace& space, const ScalarField& w);

/// Quadrature inner product sum_T |T| sum_j omega_j p(z_j) . q(z_j).
double inner_h(const FeSpace& space, const DualField& p, const DualField& q);
double dual_norm_h(const FeSpace& space, const DualField& q);

/// <q, grad w>_h.
double dual_pairing(const FeSpace& space, const DualField& q, const ScalarField& w);

/// Load vector b with b[i] = <q, grad phi_i>_h for every nodal basis phi_i,
/// so dual_pairing(q, w) == b . coeffs(w).
Eigen::VectorXd apply_div_transpose(const FeSpace& space, const DualField& q);

/// Nodal map v -> v / max(1, |v|).
DualField project_unit_ball(DualField q);

/// Nodal map v -> v / |v| with 0 -> 0.
DualField normalized(DualField q);

/// max_T max_j |q(z_j)|.
double dual_sup_norm(const DualField& q);

/// Nodal-quadrature L1 norm: sum_T |T| sum_j omega_j |q(z_j)|.
double dual_l1_norm(const FeSpace& space, const DualField& q);

bool dual_feasible(const DualField& q, double tol = 1e-12);

}  // namespace tvflow

#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace tvflow {

enum class CellKind { interval, quad, triangle };

/// Axis-aligned box domain. Only the first axis is used when dim == 1.
struct Box {
  int dim = 1;
  Eigen::Vector2d lo{0.0, 0.0};
  Eigen::Vector2d hi{1.0, 1.0};

  static Box interval(double a, double b) { return Box{1, {a, 0.0}, {b, 0.0}}; }
  static Box rectangle(double ax, double bx, double ay, double by) {
    return Box{2, {ax, ay}, {bx, by}};
  }
  static Box square(double a, double b) { return rectangle(a, b, a, b); }

  double measure() const {
    double m = hi.x() - lo.x();
    if (dim == 2) m *= hi.y() - lo.y();
    return m;
  }
};

/// Structured conforming partition of a box into intervals, quads, or
/// triangles (each grid square split along the lower-left/upper-right
/// diagonal). Vertices are ordered lexicographically, x index fastest.
/// Immutable after construction and safe to share across threads.
struct Mesh {
  int dim = 1;
  CellKind kind = CellKind::interval;
  Box domain;
  std::array<int, 2> cells_per_axis{1, 1};
  Eigen::Vector2d spacing{1.0, 0.0};

  Eigen::MatrixX2d vertices;        // n_vertices x 2, column y zero in 1D
  Eigen::MatrixXi cells;            // n_cells x verts_per_cell
  std::vector<std::uint8_t> boundary_vertex;
  double h = 0.0;                   // max cell diameter

  Eigen::Index n_vertices() const { return vertices.rows(); }
  Eigen::Index n_cells() const { return cells.rows(); }
  int verts_per_cell() const { return static_cast<int>(cells.cols()); }

  /// All cells of a uniform structured mesh have the same measure.
  double cell_measure() const;

  /// Index of the grid cell containing x (clamped to the domain). For
  /// triangle meshes resolves the sub-triangle via the diagonal test.
  Eigen::Index cell_containing(const Eigen::Vector2d& x) const;
};

/// Builds the uniform mesh of `domain` with n_per_axis cells per axis.
/// Throws std::invalid_argument on unordered bounds, n < 1, or a cell
/// kind incompatible with the dimension.
std::shared_ptr<const Mesh> build_uniform_mesh(const Box& domain,
                                               std::array<int, 2> n_per_axis,
                                               CellKind kind);

inline std::shared_ptr<const Mesh> build_uniform_mesh(const Box& domain, int n,
                                                      CellKind kind) {
  return build_uniform_mesh(domain, {n, n}, kind);
}

}  // namespace tvflow

#include "tvflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvflow {

double Mesh::cell_measure() const {
  switch (kind) {
    case CellKind::interval:
      return spacing.x();
    case CellKind::quad:
      return spacing.x() * spacing.y();
    case CellKind::triangle:
      return 0.5 * spacing.x() * spacing.y();
  }
  return 0.0;
}

Eigen::Index Mesh::cell_containing(const Eigen::Vector2d& x) const {
  const auto clamp_idx = [](double t, int n) {
    int i = static_cast<int>(std::floor(t));
    return std::clamp(i, 0, n - 1);
  };
  const int nx = cells_per_axis[0];
  const double tx = (x.x() - domain.lo.x()) / spacing.x();
  const int ix = clamp_idx(tx, nx);
  if (dim == 1) return ix;

  const int ny = cells_per_axis[1];
  const double ty = (x.y() - domain.lo.y()) / spacing.y();
  const int iy = clamp_idx(ty, ny);
  const Eigen::Index square = static_cast<Eigen::Index>(iy) * nx + ix;
  if (kind == CellKind::quad) return square;

  // Diagonal runs from the lower-left to the upper-right corner; the lower
  // triangle covers local eta <= xi.
  const double xi = std::clamp(tx - ix, 0.0, 1.0);
  const double eta = std::clamp(ty - iy, 0.0, 1.0);
  return 2 * square + (eta <= xi ? 0 : 1);
}

std::shared_ptr<const Mesh> build_uniform_mesh(const Box& domain,
                                               std::array<int, 2> n_per_axis,
                                               CellKind kind) {
  if (domain.dim != 1 && domain.dim != 2)
    throw std::invalid_argument("mesh: dim must be 1 or 2");
  if (domain.dim == 1 && kind != CellKind::interval)
    throw std::invalid_argument("mesh: 1d domains require interval cells");
  if (domain.dim == 2 && kind == CellKind::interval)
    throw std::invalid_argument("mesh: interval cells require a 1d domain");
  for (int a = 0; a < domain.dim; ++a) {
    if (!(domain.lo[a] < domain.hi[a]))
      throw std::invalid_argument("mesh: domain bounds must be strictly ordered");
    if (n_per_axis[a] < 1)
      throw std::invalid_argument("mesh: need at least one cell per axis");
  }

  auto mesh = std::make_shared<Mesh>();
  mesh->dim = domain.dim;
  mesh->kind = kind;
  mesh->domain = domain;
  mesh->cells_per_axis = n_per_axis;

  const int nx = n_per_axis[0];
  const double dx = (domain.hi.x() - domain.lo.x()) / nx;
  mesh->spacing.x() = dx;

  if (domain.dim == 1) {
    mesh->cells_per_axis[1] = 0;
    mesh->spacing.y() = 0.0;
    mesh->vertices.resize(nx + 1, 2);
    mesh->boundary_vertex.assign(nx + 1, 0);
    for (int i = 0; i <= nx; ++i) {
      mesh->vertices(i, 0) = domain.lo.x() + i * dx;
      mesh->vertices(i, 1) = 0.0;
    }
    mesh->vertices(nx, 0) = domain.hi.x();
    mesh->boundary_vertex.front() = 1;
    mesh->boundary_vertex.back() = 1;
    mesh->cells.resize(nx, 2);
    for (int i = 0; i < nx; ++i) {
      mesh->cells(i, 0) = i;
      mesh->cells(i, 1) = i + 1;
    }
    mesh->h = dx;
    return mesh;
  }

  const int ny = n_per_axis[1];
  const double dy = (domain.hi.y() - domain.lo.y()) / ny;
  mesh->spacing.y() = dy;

  const Eigen::Index nv = static_cast<Eigen::Index>(nx + 1) * (ny + 1);
  mesh->vertices.resize(nv, 2);
  mesh->boundary_vertex.assign(nv, 0);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const Eigen::Index v = static_cast<Eigen::Index>(j) * (nx + 1) + i;
      mesh->vertices(v, 0) = (i == nx) ? domain.hi.x() : domain.lo.x() + i * dx;
      mesh->vertices(v, 1) = (j == ny) ? domain.hi.y() : domain.lo.y() + j * dy;
      if (i == 0 || i == nx || j == 0 || j == ny) mesh->boundary_vertex[v] = 1;
    }
  }

  const auto vid = [nx](int i, int j) {
    return static_cast<Eigen::Index>(j) * (nx + 1) + i;
  };

  if (kind == CellKind::quad) {
    mesh->cells.resize(static_cast<Eigen::Index>(nx) * ny, 4);
    Eigen::Index c = 0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i, ++c) {
        // Local ordering lexicographic: (i,j), (i+1,j), (i,j+1), (i+1,j+1).
        mesh->cells(c, 0) = static_cast<int>(vid(i, j));
        mesh->cells(c, 1) = static_cast<int>(vid(i + 1, j));
        mesh->cells(c, 2) = static_cast<int>(vid(i, j + 1));
        mesh->cells(c, 3) = static_cast<int>(vid(i + 1, j + 1));
      }
  } else {
    mesh->cells.resize(2 * static_cast<Eigen::Index>(nx) * ny, 3);
    Eigen::Index c = 0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int a = static_cast<int>(vid(i, j));
        const int b = static_cast<int>(vid(i + 1, j));
        const int d = static_cast<int>(vid(i + 1, j + 1));
        const int e = static_cast<int>(vid(i, j + 1));
        mesh->cells(c, 0) = a; mesh->cells(c, 1) = b; mesh->cells(c, 2) = d; ++c;
        mesh->cells(c, 0) = a; mesh->cells(c, 1) = d; mesh->cells(c, 2) = e; ++c;
      }
  }

  mesh->h = std::hypot(dx, dy);  // diagonal, for quads and both triangles
  return mesh;
}

}  // namespace tvflow

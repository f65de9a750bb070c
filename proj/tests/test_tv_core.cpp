#include "doctest.h"

#include <cmath>

#include "tvflow/dual.hpp"
#include "tvflow/error.hpp"
#include "tvflow/rng.hpp"

using namespace tvflow;

TEST_CASE("vertex quadrature weights") {
  CHECK(quadrature_weights(CellKind::interval).weights.isApproxToConstant(0.5));
  CHECK(quadrature_weights(CellKind::quad).weights.isApproxToConstant(0.25));
  CHECK(quadrature_weights(CellKind::triangle).weights.isApproxToConstant(1.0 / 3.0));
  for (auto kind : {CellKind::interval, CellKind::quad, CellKind::triangle})
    CHECK(quadrature_weights(kind).weights.sum() == doctest::Approx(1.0));
}

TEST_CASE("discrete tv energy") {
  SUBCASE("constants have zero energy") {
    auto mesh = build_uniform_mesh(Box::square(0, 1), {3, 3}, CellKind::quad);
    auto space = build_fe_space(mesh);
    auto c = lagrange_interpolate(mesh, [](const Eigen::Vector2d&) { return 7.0; });
    CHECK(discrete_tv_energy(space, c) == doctest::Approx(0.0));
  }
  SUBCASE("1d hat") {
    auto mesh = build_uniform_mesh(Box::interval(0, 1), {2, 0}, CellKind::interval);
    auto space = build_fe_space(mesh);
    ScalarField hat(mesh, Eigen::Vector3d(0, 1, 0));
    CHECK(discrete_tv_energy(space, hat) == doctest::Approx(2.0));
  }
  SUBCASE("bilinear corner value on the unit square") {
    auto mesh = build_uniform_mesh(Box::square(0, 1), {1, 1}, CellKind::quad);
    auto space = build_fe_space(mesh);
    ScalarField f(mesh, Eigen::Vector4d(0, 0, 0, 1));
    CHECK(discrete_tv_energy(space, f) ==
          doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0));
  }
}

TEST_CASE("grad_to_dual") {
  auto mesh = build_uniform_mesh(Box::interval(0, 1), {2, 0}, CellKind::interval);
  auto space = build_fe_space(mesh);
  SUBCASE("constant field maps to zero") {
    auto c = lagrange_interpolate(mesh, [](const Eigen::Vector2d&) { return 2.0; });
    CHECK(grad_to_dual(space, c).values.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
  SUBCASE("unit slope everywhere") {
    ScalarField f(mesh, Eigen::Vector3d(0, 0.5, 1));
    auto q = grad_to_dual(space, f);
    CHECK(q.values.rows() == 4);
    CHECK(q.values.isApproxToConstant(1.0));
  }
}

TEST_CASE("quadrature inner product on the dual space") {
  auto mesh = build_uniform_mesh(Box::square(-3, 3), {4, 4}, CellKind::quad);
  auto space = build_fe_space(mesh);
  SUBCASE("constant unit vectors square to the domain measure") {
    auto e1 = dual_from_function(space, [](const Eigen::Vector2d&) {
      return Eigen::Vector2d(1, 0);
    });
    CHECK(inner_h(space, e1, e1) == doctest::Approx(36.0));
  }
  SUBCASE("pointwise orthogonal fields") {
    auto e1 = dual_from_function(space, [](const Eigen::Vector2d&) {
      return Eigen::Vector2d(1, 0);
    });
    auto e2 = dual_from_function(space, [](const Eigen::Vector2d&) {
      return Eigen::Vector2d(0, 1);
    });
    CHECK(inner_h(space, e1, e2) == doctest::Approx(0.0));
  }
  SUBCASE("norm_h agrees with L2 for cellwise constant fields") {
    auto q = dual_from_function(space, [](const Eigen::Vector2d&) {
      return Eigen::Vector2d(0.3, -0.4);
    });
    CHECK(dual_norm_h(space, q) == doctest::Approx(0.5 * 6.0));
  }
}

TEST_CASE("dual pairing and the transpose divergence") {
  auto mesh = build_uniform_mesh(Box::interval(0, 1), {1, 0}, CellKind::interval);
  auto space = build_fe_space(mesh);
  auto one = dual_from_function(space, [](const Eigen::Vector2d&) {
    return Eigen::Vector2d(1, 0);
  });
  SUBCASE("pairing against nodal basis functions") {
    const Eigen::VectorXd b = apply_div_transpose(space, one);
    CHECK(b[0] == doctest::Approx(-1.0));
    CHECK(b[1] == doctest::Approx(1.0));
  }
  SUBCASE("zero dual gives zero load") {
    auto z = zero_dual(space);
    CHECK(apply_div_transpose(space, z).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    ScalarField w(mesh, Eigen::Vector2d(0.3, -2.0));
    CHECK(dual_pairing(space, z, w) == doctest::Approx(0.0));
  }
}

TEST_CASE("adjointness of the pairing, random fields") {
  SplitMix64 rng(42);
  for (auto kind : {CellKind::quad, CellKind::triangle}) {
    auto mesh = build_uniform_mesh(Box::square(-1, 1), {5, 4}, kind);
    auto space = build_fe_space(mesh);
    for (int trial = 0; trial < 20; ++trial) {
      auto w = random_field(space, rng);
      DualField q = zero_dual(space);
      for (Eigen::Index i = 0; i < q.values.rows(); ++i)
        for (int c = 0; c < space.dim(); ++c) q.values(i, c) = rng.symmetric();
      const double direct = dual_pairing(space, q, w);
      const double adjoint = apply_div_transpose(space, q).dot(w.coeffs);
      CHECK(std::abs(direct - adjoint) <= 1e-13 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("pairing of a gradient with its field is the quadrature square") {
  auto mesh = build_uniform_mesh(Box::square(0, 1), {3, 3}, CellKind::quad);
  auto space = build_fe_space(mesh);
  SplitMix64 rng(7);
  auto w = random_field(space, rng);
  auto g = grad_to_dual(space, w);
  CHECK(dual_pairing(space, g, w) == doctest::Approx(inner_h(space, g, g)));
  CHECK(dual_pairing(space, g, w) >= 0.0);
}

TEST_CASE("unit ball projection") {
  auto mesh = build_uniform_mesh(Box::square(0, 1), {1, 1}, CellKind::quad);
  auto space = build_fe_space(mesh);
  DualField q = zero_dual(space);
  q.values.row(0) << 0.3, 0.4;
  q.values.row(1) << 3.0, 4.0;
  auto p = project_unit_ball(q);
  CHECK(p.values(0, 0) == doctest::Approx(0.3));
  CHECK(p.values(0, 1) == doctest::Approx(0.4));
  CHECK(p.values(1, 0) == doctest::Approx(0.6));
  CHECK(p.values(1, 1) == doctest::Approx(0.8));
  CHECK(p.values.row(2).norm() == doctest::Approx(0.0));
  CHECK(dual_sup_norm(p) <= 1.0 + 1e-12);
  CHECK(dual_feasible(p));
}

TEST_CASE("dual norms") {
  auto mesh = build_uniform_mesh(Box::square(0, 1), {2, 2}, CellKind::quad);
  auto space = build_fe_space(mesh);
  DualField q = zero_dual(space);
  CHECK(dual_sup_norm(q) == doctest::Approx(0.0));
  CHECK(dual_l1_norm(space, q) == doctest::Approx(0.0));
  q.values.row(5) << 3.0, 4.0;
  CHECK(dual_sup_norm(q) == doctest::Approx(5.0));
  // one node of one cell of measure 1/4, quad weight 1/4
  CHECK(dual_l1_norm(space, q) == doctest::Approx(0.25 * 0.25 * 5.0));
}

TEST_CASE("constant unit dual field has l1 norm equal to the measure") {
  auto mesh = build_uniform_mesh(Box::interval(-1, 1), {4, 0}, CellKind::interval);
  auto space = build_fe_space(mesh);
  auto q = dual_from_function(space, [](const Eigen::Vector2d&) {
    return Eigen::Vector2d(1, 0);
  });
  CHECK(dual_l1_norm(space, q) == doctest::Approx(2.0));
}

TEST_CASE("energy equals the pairing with the normalized gradient") {
  SplitMix64 rng(2024);
  for (auto kind : {CellKind::interval, CellKind::quad, CellKind::triangle}) {
    auto mesh = kind == CellKind::interval
                    ? build_uniform_mesh(Box::interval(0, 1), {7, 0}, kind)
                    : build_uniform_mesh(Box::square(-1, 1), {4, 3}, kind);
    auto space = build_fe_space(mesh);
    for (int trial = 0; trial < 25; ++trial) {
      auto w = random_field(space, rng);
      auto qstar = normalized(grad_to_dual(space, w));
      CHECK(dual_feasible(qstar));
      const double energy = discrete_tv_energy(space, w);
      CHECK(std::abs(energy - dual_pairing(space, qstar, w)) <= 1e-12 * std::max(1.0, energy));
      // and no feasible field can do better
      auto qrand = project_unit_ball(DualField{
          mesh, Eigen::MatrixXd::NullaryExpr(space.n_dual_nodes, space.dim(),
                                             [&](Eigen::Index, Eigen::Index) {
                                               return 2.0 * rng.symmetric();
                                             })});
      CHECK(dual_pairing(space, qrand, w) <= energy + 1e-12 * std::max(1.0, energy));
    }
  }
}

TEST_CASE("discrete energy dominates the exact total variation") {
  SplitMix64 rng(99);
  auto mesh = build_uniform_mesh(Box::square(0, 1), {4, 4}, CellKind::quad);
  auto space = build_fe_space(mesh);
  for (int trial = 0; trial < 100; ++trial) {
    auto w = random_field(space, rng);
    const double coarse = discrete_tv_energy(space, w);
    const double fine = refined_tv(*mesh, w.coeffs);
    CHECK(coarse >= fine - 1e-10 * std::max(1.0, fine));
  }
}

TEST_CASE("discrete energy equals the exact tv for p1 and interval elements") {
  SplitMix64 rng(5);
  for (auto kind : {CellKind::interval, CellKind::triangle}) {
    auto mesh = kind == CellKind::interval
                    ? build_uniform_mesh(Box::interval(0, 2), {9, 0}, kind)
                    : build_uniform_mesh(Box::square(0, 1), {3, 4}, kind);
    auto space = build_fe_space(mesh);
    for (int trial = 0; trial < 20; ++trial) {
      auto w = random_field(space, rng);
      const double coarse = discrete_tv_energy(space, w);
      const double fine = refined_tv(*mesh, w.coeffs);
      CHECK(std::abs(coarse - fine) <= 1e-12 * std::max(1.0, coarse));
    }
  }
}

TEST_CASE("homogeneity and translation invariance of the energy") {
  SplitMix64 rng(31);
  auto mesh = build_uniform_mesh(Box::square(0, 1), {5, 5}, CellKind::quad);
  auto space = build_fe_space(mesh);
  for (int trial = 0; trial < 20; ++trial) {
    auto w = random_field(space, rng);
    const double base = discrete_tv_energy(space, w);
    for (double c : {-2.5, 0.0, 0.7}) {
      ScalarField scaled(mesh, (c * w.coeffs).eval());
      CHECK(discrete_tv_energy(space, scaled) ==
            doctest::Approx(std::abs(c) * base).epsilon(1e-12));
    }
    ScalarField shifted(mesh, (w.coeffs.array() + 4.2).matrix());
    CHECK(discrete_tv_energy(space, shifted) == doctest::Approx(base).epsilon(1e-12));
  }
}

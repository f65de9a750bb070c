#pragma once

#include <Eigen/Core>

#include <vector>

namespace tvflow {

/// Closed-form benchmark solutions. Characteristic functions use the
/// closed-set convention: points exactly on an interface take the inside
/// value.
struct ExactSolution {
  enum class Kind { single_ball, three_balls, annulus, monotone_1d };

  struct Disk {
    Eigen::Vector2d center;
    double radius;
  };

  Kind kind = Kind::single_ball;
  std::vector<Disk> balls;
  double ring_inner = 0.0, ring_outer = 0.0, height = 1.0;  // annulus
  double ramp_break = 0.5;                                  // monotone_1d
  bool has_jumps = true;

  double eval(const Eigen::Vector2d& x, double t) const;
  /// First time the solution vanishes identically (monotone data never does).
  double extinction_time() const;

  static ExactSolution single_ball(const Eigen::Vector2d& center, double radius);
  static ExactSolution three_balls(double radius);  // unit-triangle vertices
  static ExactSolution annulus(double height, double r_outer, double r_inner);
  static ExactSolution monotone_ramp(double breakpoint);
};

double exact_eval(const ExactSolution& sol, const Eigen::Vector2d& x, double t);

}  // namespace tvflow

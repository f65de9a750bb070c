#include "tvflow/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvflow {

namespace {

// Shrinking rate of a calibrable set: perimeter over area.
double disk_rate(double radius) { return 2.0 / radius; }

}  // namespace

double ExactSolution::eval(const Eigen::Vector2d& x, double t) const {
  switch (kind) {
    case Kind::single_ball:
    case Kind::three_balls: {
      double value = 0.0;
      for (const Disk& b : balls)
        if ((x - b.center).norm() <= b.radius)
          value += std::max(0.0, 1.0 - disk_rate(b.radius) * t);
      return value;
    }
    case Kind::annulus: {
      const double r = x.norm();
      const double rate_band = 2.0 / (ring_outer - ring_inner);
      const double rate_core = disk_rate(ring_inner);
      const double t_merge = height / (rate_band + rate_core);
      if (t < t_merge) {
        if (r >= ring_inner && r <= ring_outer)
          return height - rate_band * t;
        if (r < ring_inner) return rate_core * t;
        return 0.0;
      }
      // After the heights merge the outer disk shrinks as one calibrable
      // set; the reported extinction time corresponds to its own rate.
      const double m = rate_core * t_merge;
      if (r <= ring_outer)
        return std::max(0.0, m - disk_rate(ring_outer) * (t - t_merge));
      return 0.0;
    }
    case Kind::monotone_1d:
      return x.x() <= ramp_break ? 0.0 : x.x() - ramp_break;
  }
  return 0.0;
}

double ExactSolution::extinction_time() const {
  switch (kind) {
    case Kind::single_ball:
    case Kind::three_balls: {
      double t = 0.0;
      for (const Disk& b : balls) t = std::max(t, 1.0 / disk_rate(b.radius));
      return t;
    }
    case Kind::annulus: {
      const double rate_band = 2.0 / (ring_outer - ring_inner);
      const double rate_core = disk_rate(ring_inner);
      const double t_merge = height / (rate_band + rate_core);
      const double m = rate_core * t_merge;
      return t_merge + m / disk_rate(ring_outer);
    }
    case Kind::monotone_1d:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

ExactSolution ExactSolution::single_ball(const Eigen::Vector2d& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("single_ball: radius must be positive");
  ExactSolution sol;
  sol.kind = Kind::single_ball;
  sol.balls = {{center, radius}};
  return sol;
}

ExactSolution ExactSolution::three_balls(double radius) {
  if (!(radius > 0) || radius > 0.2)
    throw std::invalid_argument("three_balls: radius must be in (0, 0.2]");
  ExactSolution sol;
  sol.kind = Kind::three_balls;
  sol.balls = {{{0.0, 0.0}, radius},
               {{1.0, 0.0}, radius},
               {{0.5, std::sqrt(3.0) / 2.0}, radius}};
  return sol;
}

ExactSolution ExactSolution::annulus(double height, double r_outer, double r_inner) {
  if (!(0 < r_inner && r_inner < r_outer))
    throw std::invalid_argument("annulus: need 0 < r_inner < r_outer");
  ExactSolution sol;
  sol.kind = Kind::annulus;
  sol.height = height;
  sol.ring_outer = r_outer;
  sol.ring_inner = r_inner;
  return sol;
}

ExactSolution ExactSolution::monotone_ramp(double breakpoint) {
  ExactSolution sol;
  sol.kind = Kind::monotone_1d;
  sol.ramp_break = breakpoint;
  sol.has_jumps = false;
  return sol;
}

double exact_eval(const ExactSolution& sol, const Eigen::Vector2d& x, double t) {
  return sol.eval(x, t);
}

}  // namespace tvflow

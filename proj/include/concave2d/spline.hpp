#pragma once

#include <array>
#include <span>
#include <vector>

namespace concave2d {

/// Periodic quintic B-spline interpolant on the integer knots 0..n-1.
///
/// S(i) = values[i] for every i, S has period n, and S is C^4, so
/// derivatives up to order 4 are continuous everywhere.
class PeriodicQuinticSpline {
 public:
  explicit PeriodicQuinticSpline(std::span<const double> values);

  std::size_t size() const { return coef_.size(); }

  /// S(u), S'(u), ..., S''''(u) with respect to the knot coordinate u.
  std::array<double, 5> derivatives(double u) const;

  double operator()(double u) const { return derivatives(u)[0]; }

 private:
  std::vector<double> coef_;
};

}  // namespace concave2d

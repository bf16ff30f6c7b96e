#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concave2d/geometry.hpp"

namespace concave2d {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// f(u) = 1 - c u^k; c = 0 is the torsion problem.
struct Nonlinearity {
  double c = 0.0;
  int k = 1;

  double f(double u) const;
  double df(double u) const;
  double d2f(double u) const;
  bool is_torsion() const { return c == 0.0; }
  std::string family() const;
};

Nonlinearity nonlinearity_power(double c, int k);
inline Nonlinearity torsion() { return {}; }

struct Condition2Verdict {
  bool pass = true;
  std::vector<std::string> violations;  // "f(0) != 1", "f > 0", "f' <= 0", "f'' <= 0"
};

/// Samples f, f', f'' on [0, u_max] (1024 points) and checks f(0) = 1, f > 0, f' <= 0, f'' <= 0.
Condition2Verdict check_condition2(const Nonlinearity& f, double u_max);

struct SolveConfig {
  double h = 1.0 / 64.0;
  double tol_fix = 1e-10;
  int max_iter = 200;
};

/// Finite-difference solution on the lattice x = i h, y = j h.
///
/// Nodes (i, j) with 0 <= i < nx, 0 <= j < ny correspond to lattice indices
/// (i0 + i, j0 + j). Each interior node keeps the lengths of its four stencil
/// legs (east, west, north, south); a leg shorter than h ends on the boundary.
struct GridSolution {
  double h = 0.0;
  int i0 = 0, j0 = 0;
  int nx = 0, ny = 0;
  std::vector<double> values;              // nx * ny, zero outside
  std::vector<int> index;                  // unknown number or -1
  std::vector<std::array<double, 4>> legs; // per unknown: E, W, N, S
  std::vector<int> node_of;                // unknown -> flat node id
  std::shared_ptr<const ConvexRegion> region;
  Nonlinearity f;
  int iterations = 0;
  double update_norm = 0.0;
  double residual = 0.0;  // max |Delta_h u + f(u)| over unknowns
  double max_u = 0.0;
  bool positive = true;   // u > 0 at every interior node
  bool f_positive = true; // f(u) > 0 at every node along the iteration

  double x(int i) const { return (i0 + i) * h; }
  double y(int j) const { return (j0 + j) * h; }
  int flat(int i, int j) const { return j * nx + i; }
  bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  bool interior(int i, int j) const { return in_range(i, j) && index[flat(i, j)] >= 0; }
  double at(int i, int j) const { return in_range(i, j) ? values[flat(i, j)] : 0.0; }
  std::size_t unknowns() const { return node_of.size(); }
  /// Lattice cell containing p: returns (i, j) with x(i) <= p.x < x(i+1).
  std::array<int, 2> cell_of(const Vec2& p) const;
};

GridSolution solve_dirichlet(std::shared_ptr<const ConvexRegion> region, const Nonlinearity& f,
                             const SolveConfig& config = {});
GridSolution solve_dirichlet(const BoundaryCurve& curve, const Nonlinearity& f, const SolveConfig& config = {});

/// u = c (1 - a^2 x^2 - b^2 y^2), c = 1 / (2a^2 + 2b^2): torsion on a^2 x^2 + b^2 y^2 < 1.
struct EllipseTorsion {
  double a = 1.0, b = 1.0, c = 0.25;

  double value(const Vec2& p) const;
  Vec2 gradient(const Vec2& p) const;
  Mat2 hessian() const;
};

EllipseTorsion exact_ellipse_torsion(double a, double b);

/// u and its first and second derivatives at an arbitrary point, from the
/// bicubic Lagrange interpolant on the surrounding 4x4 block of interior nodes.
struct LocalValue {
  double u = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

/// Empty when the 4x4 block is not fully interior.
std::optional<LocalValue> interpolate(const GridSolution& sol, const Vec2& p);

/// Inward normal derivative at the boundary point of parameter t, by the
/// one-sided formula (4 u(delta) - u(2 delta)) / (2 delta) along the normal.
double normal_derivative(const GridSolution& sol, const BoundaryCurve& curve, double t);

/// Smallest offset k h (k >= 2) along the inward normal at which both
/// interpolation blocks at k h and 2 k h are interior.
double normal_offset(const GridSolution& sol, const Vec2& point, const Vec2& normal);

}  // namespace concave2d

#include "concave2d/pde.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace concave2d {

double Nonlinearity::f(double u) const { return 1.0 - c * std::pow(u, k); }

double Nonlinearity::df(double u) const { return -c * k * std::pow(u, k - 1); }

double Nonlinearity::d2f(double u) const { return k >= 2 ? -c * k * (k - 1) * std::pow(u, k - 2) : 0.0; }

std::string Nonlinearity::family() const {
  if (is_torsion()) return "torsion";
  return "power";
}

Nonlinearity nonlinearity_power(double c, int k) {
  if (!(c >= 0.0) || k < 1) throw std::invalid_argument("nonlinearity: need c >= 0 and integer k >= 1");
  return {c, k};
}

Condition2Verdict check_condition2(const Nonlinearity& f, double u_max) {
  Condition2Verdict v;
  auto fail = [&](const char* clause) {
    if (std::find(v.violations.begin(), v.violations.end(), clause) == v.violations.end()) v.violations.push_back(clause);
    v.pass = false;
  };
  if (f.f(0.0) != 1.0) fail("f(0) != 1");
  constexpr int n = 1024;
  for (int i = 0; i < n; ++i) {
    const double u = u_max * i / (n - 1);
    if (!(f.f(u) > 0.0)) fail("f > 0");
    if (!(f.df(u) <= 0.0)) fail("f' <= 0");
    if (!(f.d2f(u) <= 0.0)) fail("f'' <= 0");
  }
  return v;
}

std::array<int, 2> GridSolution::cell_of(const Vec2& p) const {
  return {static_cast<int>(std::floor(p.x() / h)) - i0, static_cast<int>(std::floor(p.y() / h)) - j0};
}

// ---------------------------------------------------------------------------

namespace {

// Nodes closer than this (relative to h) to the boundary are treated as boundary points.
constexpr double kEdgeFraction = 1e-9;

}  // namespace

GridSolution solve_dirichlet(std::shared_ptr<const ConvexRegion> region, const Nonlinearity& f,
                             const SolveConfig& config) {
  const double h = config.h;
  if (!(h > 0.0)) throw SolverError("solve: grid spacing must be positive");
  GridSolution sol;
  sol.h = h;
  sol.region = region;
  sol.f = f;

  const auto box = region->bounding_box();
  sol.i0 = static_cast<int>(std::ceil(box.min().x() / h));
  sol.j0 = static_cast<int>(std::ceil(box.min().y() / h));
  sol.nx = static_cast<int>(std::floor(box.max().x() / h)) - sol.i0 + 1;
  sol.ny = static_cast<int>(std::floor(box.max().y() / h)) - sol.j0 + 1;
  if (sol.nx < 3 || sol.ny < 3) throw SolverError("solve: grid does not resolve the domain");

  const double eps = kEdgeFraction * h;
  std::vector<std::optional<Chord>> rows(sol.ny), cols(sol.nx);
  for (int j = 0; j < sol.ny; ++j) rows[j] = region->chord_at_y(sol.y(j));
  for (int i = 0; i < sol.nx; ++i) cols[i] = region->chord_at_x(sol.x(i));

  sol.index.assign(static_cast<std::size_t>(sol.nx) * sol.ny, -1);
  sol.values.assign(sol.index.size(), 0.0);
  for (int j = 0; j < sol.ny; ++j) {
    if (!rows[j]) continue;
    for (int i = 0; i < sol.nx; ++i) {
      const double x = sol.x(i), y = sol.y(j);
      // Both chords are consulted so that a grid line running along a straight edge stays exterior.
      if (x > rows[j]->lo + eps && x < rows[j]->hi - eps && cols[i] && y > cols[i]->lo + eps && y < cols[i]->hi - eps) {
        sol.index[sol.flat(i, j)] = static_cast<int>(sol.node_of.size());
        sol.node_of.push_back(sol.flat(i, j));
      }
    }
  }
  const std::size_t n = sol.node_of.size();
  if (n == 0) throw SolverError("solve: no interior nodes");

  auto clip = [&](double leg) { return std::clamp(leg, eps, h); };
  sol.legs.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const int i = sol.node_of[p] % sol.nx, j = sol.node_of[p] / sol.nx;
    const double x = sol.x(i), y = sol.y(j);
    auto& L = sol.legs[p];
    L[0] = sol.interior(i + 1, j) ? h : clip(rows[j]->hi - x);
    L[1] = sol.interior(i - 1, j) ? h : clip(x - rows[j]->lo);
    L[2] = sol.interior(i, j + 1) ? h : clip(cols[i]->hi - y);
    L[3] = sol.interior(i, j - 1) ? h : clip(y - cols[i]->lo);
  }

  // Shortley-Weller: -u_xx ~ 2/(hE hW) u0 - 2/(hE (hE+hW)) uE - 2/(hW (hE+hW)) uW, boundary values 0.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  std::vector<double> diag(n);
  for (std::size_t p = 0; p < n; ++p) {
    const int i = sol.node_of[p] % sol.nx, j = sol.node_of[p] / sol.nx;
    const auto& L = sol.legs[p];
    const double hE = L[0], hW = L[1], hN = L[2], hS = L[3];
    diag[p] = 2.0 / (hE * hW) + 2.0 / (hN * hS);
    trip.emplace_back(p, p, diag[p]);
    auto couple = [&](int ii, int jj, double w) {
      if (sol.interior(ii, jj)) trip.emplace_back(p, sol.index[sol.flat(ii, jj)], -w);
    };
    couple(i + 1, j, 2.0 / (hE * (hE + hW)));
    couple(i - 1, j, 2.0 / (hW * (hE + hW)));
    couple(i, j + 1, 2.0 / (hN * (hN + hS)));
    couple(i, j - 1, 2.0 / (hS * (hN + hS)));
  }
  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("solve: sparse factorization failed");

  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd rhs(u.size());
  auto eval_rhs = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index p = 0; p < v.size(); ++p) {
      const double fv = f.f(v[p]);
      if (!(fv > 0.0)) sol.f_positive = false;
      if (fv < 0.0) throw SolverError("solve: f(u) < 0 at a node; no positive solution along this iteration");
      rhs[p] = fv;
    }
  };

  bool converged = false;
  for (int m = 0; m < config.max_iter; ++m) {
    eval_rhs(u);
    Eigen::VectorXd next = lu.solve(rhs);
    sol.update_norm = (next - u).lpNorm<Eigen::Infinity>();
    u = std::move(next);
    sol.iterations = m + 1;
    if (sol.update_norm < config.tol_fix) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("solve: Picard iteration did not converge within max_iter");

  // Row residuals are rescaled by diag h^2 / 4 so that short-leg rows, whose
  // coefficients grow like 1/leg, are measured on the same footing as regular ones.
  eval_rhs(u);
  const Eigen::VectorXd r = A * u - rhs;
  sol.residual = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    sol.residual = std::max(sol.residual, std::abs(r[p]) * 4.0 / (diag[p] * h * h));

  for (std::size_t p = 0; p < n; ++p) {
    sol.values[sol.node_of[p]] = u[p];
    sol.max_u = std::max(sol.max_u, u[p]);
    if (!(u[p] > 0.0)) sol.positive = false;
  }
  return sol;
}

GridSolution solve_dirichlet(const BoundaryCurve& curve, const Nonlinearity& f, const SolveConfig& config) {
  return solve_dirichlet(std::make_shared<CurveRegion>(curve), f, config);
}

// ---------------------------------------------------------------------------

double EllipseTorsion::value(const Vec2& p) const {
  return c * (1.0 - a * a * p.x() * p.x() - b * b * p.y() * p.y());
}

Vec2 EllipseTorsion::gradient(const Vec2& p) const { return {-2.0 * c * a * a * p.x(), -2.0 * c * b * b * p.y()}; }

Mat2 EllipseTorsion::hessian() const {
  Mat2 H = Mat2::Zero();
  H(0, 0) = -2.0 * c * a * a;
  H(1, 1) = -2.0 * c * b * b;
  return H;
}

EllipseTorsion exact_ellipse_torsion(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse torsion: a, b must be positive");
  return {a, b, 1.0 / (2.0 * a * a + 2.0 * b * b)};
}

namespace {

// Cubic Lagrange basis on nodes -1, 0, 1, 2 at s, with first and second derivatives.
struct Weights {
  std::array<double, 4> w, d1, d2;
};

Weights cubic_weights(double s) {
  Weights r;
  r.w = {-s * (s - 1) * (s - 2) / 6, (s + 1) * (s - 1) * (s - 2) / 2, -(s + 1) * s * (s - 2) / 2,
         (s + 1) * s * (s - 1) / 6};
  r.d1 = {-(3 * s * s - 6 * s + 2) / 6, (3 * s * s - 4 * s - 1) / 2, -(3 * s * s - 2 * s - 2) / 2,
          (3 * s * s - 1) / 6};
  r.d2 = {-(s - 1), (3 * s - 2), -(3 * s - 1), s};
  return r;
}

}  // namespace

std::optional<LocalValue> interpolate(const GridSolution& sol, const Vec2& p) {
  const auto [i, j] = sol.cell_of(p);
  for (int dj = -1; dj <= 2; ++dj)
    for (int di = -1; di <= 2; ++di)
      if (!sol.interior(i + di, j + dj)) return std::nullopt;
  const double h = sol.h;
  const Weights wx = cubic_weights((p.x() - sol.x(i)) / h);
  const Weights wy = cubic_weights((p.y() - sol.y(j)) / h);
  LocalValue v;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) {
      const double u = sol.at(i + a - 1, j + b - 1);
      v.u += wx.w[a] * wy.w[b] * u;
      v.grad.x() += wx.d1[a] * wy.w[b] * u;
      v.grad.y() += wx.w[a] * wy.d1[b] * u;
      v.hess(0, 0) += wx.d2[a] * wy.w[b] * u;
      v.hess(1, 1) += wx.w[a] * wy.d2[b] * u;
      v.hess(0, 1) += wx.d1[a] * wy.d1[b] * u;
    }
  v.grad /= h;
  v.hess /= h * h;
  v.hess(1, 0) = v.hess(0, 1);
  return v;
}

double normal_offset(const GridSolution& sol, const Vec2& point, const Vec2& normal) {
  for (int k = 2; k <= 16; ++k) {
    const double d = k * sol.h;
    if (interpolate(sol, point + d * normal) && interpolate(sol, point + 2.0 * d * normal)) return d;
  }
  throw SolverError("normal derivative: no interior stencil along the normal (grid too coarse here)");
}

double normal_derivative(const GridSolution& sol, const BoundaryCurve& curve, double t) {
  const LocalJet jet = local_jet(curve, t);
  const double d = normal_offset(sol, jet.point, jet.inward_normal);
  const double u1 = interpolate(sol, jet.point + d * jet.inward_normal)->u;
  const double u2 = interpolate(sol, jet.point + 2.0 * d * jet.inward_normal)->u;
  return (4.0 * u1 - u2) / (2.0 * d);
}

}  // namespace concave2d

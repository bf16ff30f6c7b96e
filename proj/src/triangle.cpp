#include "concave2d/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace concave2d {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Root of the cubic (or lower) Lagrange interpolant through (xs, vs) minus level on [a, b].
double interpolated_root(const std::vector<double>& xs, const std::vector<double>& vs, double a, double b,
                         double level) {
  auto p = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double w = 1.0;
      for (std::size_t k = 0; k < xs.size(); ++k)
        if (k != i) w *= (x - xs[k]) / (xs[i] - xs[k]);
      s += w * vs[i];
    }
    return s - level;
  };
  double fa = p(a);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = p(m);
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Crossings along one line given its samples (positions along the line and values).
void line_crossings(const std::vector<double>& pos, const std::vector<double>& val, double level,
                    std::vector<double>& out) {
  const int n = static_cast<int>(pos.size());
  for (int k = 0; k + 1 < n; ++k) {
    const bool below_a = val[k] < level, below_b = val[k + 1] < level;
    if (below_a == below_b) continue;
    const int lo = std::clamp(k - 1, 0, std::max(0, n - 4));
    const int hi = std::min(n, lo + 4);
    std::vector<double> xs(pos.begin() + lo, pos.begin() + hi), vs(val.begin() + lo, val.begin() + hi);
    out.push_back(interpolated_root(xs, vs, pos[k], pos[k + 1], level));
  }
}

}  // namespace

std::vector<Vec2> level_curve_rays(const GridSolution& sol, double level, int rays) {
  if (!(level > 0.0 && level < sol.max_u)) throw GeometryError("level curve: level outside (0, max u)");
  Vec2 center = Vec2::Zero();
  for (int j = 0; j < sol.ny; ++j)
    for (int i = 0; i < sol.nx; ++i)
      if (sol.interior(i, j) && sol.at(i, j) == sol.max_u) center = {sol.x(i), sol.y(j)};
  const double step = 0.5 * sol.h;
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(rays));
  for (int k = 0; k < rays; ++k) {
    const double theta = 2.0 * kPi * k / rays;
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    double lo = 0.0, hi = step;
    bool ok = true;
    auto above = [&](double r) {
      const auto v = interpolate(sol, center + r * dir);
      if (!v) ok = false;
      return v && v->u >= level;
    };
    while (above(hi)) {
      lo = hi;
      hi += step;
    }
    if (!ok) continue;
    for (int it = 0; it < 60 && ok; ++it) {
      const double mid = 0.5 * (lo + hi);
      (above(mid) ? lo : hi) = mid;
    }
    if (ok) pts.push_back(center + 0.5 * (lo + hi) * dir);
  }
  return pts;
}

std::vector<Vec2> unit_triangle() { return {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}}; }

std::vector<Vec2> level_crossings(const GridSolution& sol, double level) {
  std::vector<Vec2> pts;
  std::vector<double> pos, val, roots;
  for (int j = 0; j < sol.ny; ++j) {
    const auto chord = sol.region->chord_at_y(sol.y(j));
    if (!chord) continue;
    pos = {chord->lo};
    val = {0.0};
    for (int i = 0; i < sol.nx; ++i)
      if (sol.interior(i, j)) {
        pos.push_back(sol.x(i));
        val.push_back(sol.at(i, j));
      }
    pos.push_back(chord->hi);
    val.push_back(0.0);
    roots.clear();
    line_crossings(pos, val, level, roots);
    for (double x : roots) pts.emplace_back(x, sol.y(j));
  }
  for (int i = 0; i < sol.nx; ++i) {
    const auto chord = sol.region->chord_at_x(sol.x(i));
    if (!chord) continue;
    pos = {chord->lo};
    val = {0.0};
    for (int j = 0; j < sol.ny; ++j)
      if (sol.interior(i, j)) {
        pos.push_back(sol.y(j));
        val.push_back(sol.at(i, j));
      }
    pos.push_back(chord->hi);
    val.push_back(0.0);
    roots.clear();
    line_crossings(pos, val, level, roots);
    for (double y : roots) pts.emplace_back(sol.x(i), y);
  }
  return pts;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (points.size() < 3) return points;
  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Vec2> smooth_convex_polygon(const std::vector<Vec2>& polygon, double width, int samples) {
  const std::size_t n = polygon.size();
  if (n < 3) throw GeometryError("smoothing: polygon needs at least 3 vertices");
  if (!(width > 0.0)) throw GeometryError("smoothing: width must be positive");
  if (samples < 16) throw GeometryError("smoothing: too few samples");

  // Unwrapped tangent angle of each edge and arclength at each vertex.
  std::vector<double> s0(n + 1, 0.0), theta(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 e = polygon[(j + 1) % n] - polygon[j];
    s0[j + 1] = s0[j] + e.norm();
    theta[j] = std::atan2(e.y(), e.x());
    if (j > 0) {
      double turn = std::remainder(theta[j] - theta[j - 1], 2.0 * kPi);
      if (turn < 0.0) throw GeometryError("smoothing: polygon is not counterclockwise convex");
      theta[j] = theta[j - 1] + turn;
    }
  }
  const double L = s0[n];
  if (!(width < 0.1 * L)) throw GeometryError("smoothing: width too large for the polygon");

  // Gaussian-smoothed tangent angle; theta(s + L) = theta(s) + 2 pi.
  const double reach = 10.0 * width;
  auto Phi = [&](double x) { return 0.5 * std::erfc(-x / (std::sqrt(2.0) * width)); };
  auto smooth_theta = [&](double s) {
    double acc = 0.0;
    for (int k = -1; k <= 1; ++k) {
      const double shift = k * L;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = s0[j] + shift, b = s0[j + 1] + shift;
        if (b < s - reach || a > s + reach) continue;
        acc += (theta[j] + 2.0 * kPi * k) * (Phi(s - a) - Phi(s - b));
      }
    }
    return acc;
  };

  // Tangent integrated with Simpson's rule, 16 panels per output sample.
  const int sub = 16, fine = samples * sub;
  const double ds = L / fine;
  std::vector<cplx> tangent(static_cast<std::size_t>(2 * fine + 1));
  for (int i = 0; i <= 2 * fine; ++i) tangent[static_cast<std::size_t>(i)] = std::polar(1.0, smooth_theta(0.5 * ds * i));
  std::vector<cplx> z(static_cast<std::size_t>(fine + 1));
  z[0] = 0.0;
  for (int i = 0; i < fine; ++i) {
    const auto k = static_cast<std::size_t>(2 * i);
    z[static_cast<std::size_t>(i) + 1] = z[static_cast<std::size_t>(i)] + ds / 6.0 * (tangent[k] + 4.0 * tangent[k + 1] + tangent[k + 2]);
  }
  // Close the curve by a uniform tangent correction (curvature keeps its sign
  // while |gap| < L). Rounding shortens the corners while the length is kept,
  // so scale back to the polygon's area and centroid.
  const cplx gap = z[static_cast<std::size_t>(fine)];
  if (std::abs(gap) > 0.01 * L) throw GeometryError("smoothing: smoothed tangent does not close");
  std::vector<Vec2> pts(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const cplx q = z[static_cast<std::size_t>(k * sub)] - gap * (static_cast<double>(k) / samples);
    pts[static_cast<std::size_t>(k)] = {q.real(), q.imag()};
  }
  auto moments = [](const std::vector<Vec2>& poly) {
    double area = 0.0;
    Vec2 c = Vec2::Zero();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& p = poly[i];
      const Vec2& q = poly[(i + 1) % poly.size()];
      const double w = p.x() * q.y() - q.x() * p.y();
      area += 0.5 * w;
      c += w * (p + q) / 6.0;
    }
    return std::pair{area, Vec2(c / area)};
  };
  const auto [area_p, centroid_p] = moments(polygon);
  const auto [area_c, centroid_c] = moments(pts);
  const double scale = std::sqrt(area_p / area_c);
  for (auto& p : pts) p = centroid_p + scale * (p - centroid_c);
  return pts;
}

TriangleLevelset triangle_levelset_domain(const TriangleLevelsetConfig& config) {
  if (!(config.epsilon_fraction > 0.0 && config.epsilon_fraction < 1.0))
    throw GeometryError("triangle level set: epsilon fraction must lie in (0, 1)");
  auto region = std::make_shared<PolygonRegion>(unit_triangle());
  const GridSolution sol = solve_dirichlet(region, torsion(), {config.grid_h});

  TriangleLevelset out{.curve = curve_from_spec(DomainSpec{EllipseSpec{}, {}}), .contour = {}, .hull = {}};
  out.triangle_max_u = sol.max_u;
  out.epsilon = config.epsilon_fraction * sol.max_u;
  // Grid-line crossings resolve the flat sides, where the level curve runs
  // within a cell of the edges; rays resolve the rounded corners.
  out.contour = level_crossings(sol, out.epsilon);
  const auto rays = level_curve_rays(sol, out.epsilon, config.rays);
  out.contour.insert(out.contour.end(), rays.begin(), rays.end());
  if (out.contour.size() < 16) throw GeometryError("triangle level set: contour extraction found too few points");

  out.hull = convex_hull(out.contour);

  DomainSpec spec{SampledSpec{smooth_convex_polygon(out.hull, config.smoothing, config.samples)}, {}};
  out.curve = curve_from_spec(spec);
  out.min_curvature = convexity_check(out.curve, 4 * config.samples);
  if (!(out.min_curvature > 0.0)) throw GeometryError("triangle level set: fitted curve is not convex");
  return out;
}

}  // namespace concave2d

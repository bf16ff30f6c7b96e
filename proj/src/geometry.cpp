#include "concave2d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "concave2d/series.hpp"

namespace concave2d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

bool finite(double v) { return std::isfinite(v); }

// cos/sin of (theta + k pi/2)
Vec2 quarter_turn(double theta, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {std::cos(theta), std::sin(theta)};
    case 1: return {-std::sin(theta), std::cos(theta)};
    case 2: return {-std::cos(theta), -std::sin(theta)};
    default: return {std::sin(theta), -std::cos(theta)};
  }
}

// Gauss-Legendre nodes/weights on [-1, 1], 5 points.
constexpr double kGLx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                            0.9061798459386640};
constexpr double kGLw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                            0.4786286704993665, 0.2369268850561891};

double speed_at(const BoundaryCurve& c, double t) { return c.derivatives(t)[1].norm(); }

double gauss_length(const BoundaryCurve& c, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kGLw[i] * speed_at(c, mid + half * kGLx[i]);
  return acc * half;
}

}  // namespace

Vec2 Similarity::apply(const Vec2& local) const { return center + apply_linear(local); }

Vec2 Similarity::apply_linear(const Vec2& v) const {
  const double cs = std::cos(rotation), sn = std::sin(rotation);
  return scale * Vec2(cs * v.x() - sn * v.y(), sn * v.x() + cs * v.y());
}

std::string DomainSpec::kind() const {
  struct Visitor {
    std::string operator()(const EllipseSpec&) const { return "ellipse"; }
    std::string operator()(const PolarFourierSpec&) const { return "polar-fourier"; }
    std::string operator()(const SampledSpec&) const { return "sampled"; }
  };
  return std::visit(Visitor{}, shape);
}

BoundaryCurve::BoundaryCurve(DomainSpec spec) : spec_(std::move(spec)) {
  if (const auto* s = std::get_if<SampledSpec>(&spec_.shape)) {
    std::vector<double> xs, ys;
    xs.reserve(s->points.size());
    ys.reserve(s->points.size());
    for (const auto& p : s->points) {
      xs.push_back(p.x());
      ys.push_back(p.y());
    }
    spline_x_ = std::make_shared<PeriodicQuinticSpline>(xs);
    spline_y_ = std::make_shared<PeriodicQuinticSpline>(ys);
  }
}

BoundaryCurve::Derivatives BoundaryCurve::local_derivatives(double t) const {
  Derivatives d;
  if (const auto* e = std::get_if<EllipseSpec>(&spec_.shape)) {
    const double theta = kTwoPi * t;
    double w = 1.0;
    for (int k = 0; k <= 4; ++k) {
      const Vec2 q = quarter_turn(theta, k);
      d[k] = w * Vec2(e->p * q.x(), e->q * q.y());
      w *= kTwoPi;
    }
  } else if (const auto* pf = std::get_if<PolarFourierSpec>(&spec_.shape)) {
    const double theta = kTwoPi * t;
    // r^(j)(theta)
    std::array<double, 5> r{};
    r[0] = pf->r0;
    const std::size_t modes = std::max(pf->cos_coeffs.size(), pf->sin_coeffs.size());
    for (std::size_t m = 1; m <= modes; ++m) {
      const double a = m <= pf->cos_coeffs.size() ? pf->cos_coeffs[m - 1] : 0.0;
      const double b = m <= pf->sin_coeffs.size() ? pf->sin_coeffs[m - 1] : 0.0;
      double mk = 1.0;
      for (int j = 0; j <= 4; ++j) {
        const Vec2 q = quarter_turn(static_cast<double>(m) * theta, j);  // (cos, sin)(m theta + j pi/2)
        r[j] += mk * (a * q.x() + b * q.y());
        mk *= static_cast<double>(m);
      }
    }
    static constexpr double binom[5][5] = {
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
    double w = 1.0;
    for (int n = 0; n <= 4; ++n) {
      Vec2 acc = Vec2::Zero();
      for (int j = 0; j <= n; ++j) acc += binom[n][j] * r[n - j] * quarter_turn(theta, j);
      d[n] = w * acc;
      w *= kTwoPi;
    }
  } else {
    const double n = static_cast<double>(spline_x_->size());
    const double u = wrap_unit(t) * n;
    const auto dx = spline_x_->derivatives(u);
    const auto dy = spline_y_->derivatives(u);
    double w = 1.0;
    for (int k = 0; k <= 4; ++k) {
      d[k] = w * Vec2(dx[k], dy[k]);
      w *= n;
    }
  }
  return d;
}

BoundaryCurve::Derivatives BoundaryCurve::derivatives(double t) const {
  Derivatives d = local_derivatives(t);
  d[0] = spec_.transform.apply(d[0]);
  for (int k = 1; k <= 4; ++k) d[k] = spec_.transform.apply_linear(d[k]);
  return d;
}

BoundaryCurve curve_from_spec(const DomainSpec& spec) {
  const auto& tr = spec.transform;
  if (!finite(tr.scale) || tr.scale <= 0.0) throw GeometryError("domain spec: transform scale must be positive");
  if (!finite(tr.rotation) || !finite(tr.center.x()) || !finite(tr.center.y()))
    throw GeometryError("domain spec: transform must be finite");

  if (const auto* e = std::get_if<EllipseSpec>(&spec.shape)) {
    if (!finite(e->p) || !finite(e->q) || e->p <= 0.0 || e->q <= 0.0)
      throw GeometryError("ellipse spec: semi-axes must be positive");
  } else if (const auto* pf = std::get_if<PolarFourierSpec>(&spec.shape)) {
    if (!finite(pf->r0) || pf->r0 <= 0.0) throw GeometryError("polar-fourier spec: r0 must be positive");
    for (double v : pf->cos_coeffs)
      if (!finite(v)) throw GeometryError("polar-fourier spec: non-finite coefficient");
    for (double v : pf->sin_coeffs)
      if (!finite(v)) throw GeometryError("polar-fourier spec: non-finite coefficient");
  } else {
    const auto& s = std::get<SampledSpec>(spec.shape);
    if (s.points.size() < 512) throw GeometryError("sampled spec: at least 512 points are required");
    for (const auto& p : s.points)
      if (!finite(p.x()) || !finite(p.y())) throw GeometryError("sampled spec: non-finite point");
    if (polygon_area(s.points) <= 0.0) throw GeometryError("sampled spec: points must be counterclockwise");
  }

  BoundaryCurve curve(spec);
  if (std::holds_alternative<PolarFourierSpec>(spec.shape)) {
    for (int i = 0; i < 1024; ++i) {
      const double theta = kTwoPi * i / 1024.0;
      if ((curve.local_derivatives(i / 1024.0)[0]).norm() <= 0.0 ||
          curve.local_derivatives(i / 1024.0)[0].dot(Vec2(std::cos(theta), std::sin(theta))) <= 0.0)
        throw GeometryError("polar-fourier spec: radius must stay positive");
    }
  }
  return curve;
}

LocalJet local_jet(const BoundaryCurve& curve, double t) {
  const auto d = curve.derivatives(t);
  const Vec2& v = d[1];
  const double sp = v.norm();
  if (!(sp > 1e-14)) throw GeometryError("local_jet: zero-speed parametrization point");
  const double cr = cross(v, d[2]);
  const double s3 = sp * sp * sp;
  LocalJet jet;
  jet.t = t;
  jet.point = d[0];
  jet.speed = sp;
  jet.tangent = v / sp;
  jet.inward_normal = Vec2(-jet.tangent.y(), jet.tangent.x());
  jet.curvature = cr / s3;
  const double dk_dt = cross(v, d[3]) / s3 - 3.0 * cr * v.dot(d[2]) / (s3 * sp * sp);
  jet.curvature_ds = dk_dt / sp;
  return jet;
}

PreferredFrame preferred_frame(const LocalJet& jet) {
  PreferredFrame f;
  f.origin = jet.point;
  f.rotation.row(0) = jet.tangent.transpose();
  f.rotation.row(1) = jet.inward_normal.transpose();
  return f;
}

PreferredFrame preferred_frame(const BoundaryCurve& curve, double t) {
  return preferred_frame(local_jet(curve, t));
}

std::array<double, 5> graph_derivatives_at(const BoundaryCurve& curve, const PreferredFrame& frame,
                                           double s) {
  const auto d = curve.derivatives(s);
  Series<4> xs, ys;
  const Vec2 p = frame.to_local(d[0]);
  ys.c[0] = p.y();
  double fact = 1.0;
  for (int k = 1; k <= 4; ++k) {
    fact *= k;
    const Vec2 lk = frame.vector_to_local(d[k]);
    xs.c[k] = lk.x() / fact;
    ys.c[k] = lk.y() / fact;
  }
  if (!(xs.c[1] > 0.0)) throw GeometryError("local graph: boundary is not a graph over the tangent line here");
  const Series<4> rho = compose(ys, revert(xs));
  return rho.derivatives();
}

LocalGraph::LocalGraph(const BoundaryCurve& curve, double t, double halfwidth)
    : curve_(curve), frame_(preferred_frame(curve, t)), t0_(t), halfwidth_(halfwidth), t_lo_(t), t_hi_(t) {
  if (!(halfwidth > 0.0)) throw GeometryError("local_graph: halfwidth must be positive");
  constexpr double kMaxSlope = 10.0;
  constexpr double kStep = 1.0 / 8192.0;
  auto local_x = [&](double s) { return frame_.to_local(curve_.position(s)).x(); };
  auto local_dx = [&](double s) { return frame_.vector_to_local(curve_.derivatives(s)[1]).x(); };

  for (int dir : {+1, -1}) {
    double s = t;
    double reached = t;
    bool done = false;
    for (int step = 1; step <= 4096 && !done; ++step) {
      s = t + dir * step * kStep;
      const auto d = curve_.derivatives(s);
      const Vec2 tl = frame_.vector_to_local(d[1]);
      if (!(tl.x() > 0.0) || std::abs(tl.y()) > kMaxSlope * tl.x())
        throw GeometryError("local_graph: window too wide, boundary is not a graph with slope <= 10");
      if (dir * frame_.to_local(d[0]).x() >= halfwidth) {
        const double prev = s - dir * kStep;
        reached = solve_bracketed([&](double q) { return local_x(q) - dir * halfwidth; }, local_dx,
                                  std::min(prev, s), std::max(prev, s), 1e-15);
        done = true;
      }
    }
    if (!done) throw GeometryError("local_graph: window too wide for this curve");
    if (dir > 0)
      t_hi_ = reached;
    else
      t_lo_ = reached;
  }
}

LocalGraph local_graph(const BoundaryCurve& curve, double t, double halfwidth) {
  return LocalGraph(curve, t, halfwidth);
}

double LocalGraph::parameter_at(double x) const {
  if (std::abs(x) > halfwidth_ * (1.0 + 1e-12)) throw GeometryError("LocalGraph: abscissa outside window");
  if (x == 0.0) return t0_;
  auto f = [&](double s) { return frame_.to_local(curve_.position(s)).x() - x; };
  auto df = [&](double s) { return frame_.vector_to_local(curve_.derivatives(s)[1]).x(); };
  const double lo = x > 0 ? t0_ : t_lo_;
  const double hi = x > 0 ? t_hi_ : t0_;
  // at the window ends the residual may round to the wrong sign
  const double end = x > 0 ? t_hi_ : t_lo_;
  if (std::abs(f(end)) <= 1e-13 * halfwidth_) return end;
  return solve_bracketed(f, df, lo, hi, 1e-16);
}

std::array<double, 5> LocalGraph::derivatives(double x) const {
  if (x == 0.0) {
    auto d = graph_derivatives_at(curve_, frame_, t0_);
    d[0] = 0.0;
    d[1] = 0.0;
    return d;
  }
  return graph_derivatives_at(curve_, frame_, parameter_at(x));
}

double convexity_check(const BoundaryCurve& curve, int n_samples) {
  double kmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) kmin = std::min(kmin, local_jet(curve, static_cast<double>(i) / n_samples).curvature);
  return kmin;
}

double enclosed_area(const BoundaryCurve& curve, int n_samples) {
  // Green's theorem with the periodic trapezoid rule (spectrally accurate).
  double acc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const auto d = curve.derivatives(static_cast<double>(i) / n_samples);
    acc += cross(d[0], d[1]);
  }
  return 0.5 * acc / n_samples;
}

double total_curvature(const BoundaryCurve& curve, int n_samples) {
  double acc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const auto j = local_jet(curve, static_cast<double>(i) / n_samples);
    acc += j.curvature * j.speed;
  }
  return acc / n_samples;
}

double perimeter(const BoundaryCurve& curve, int n_samples) {
  double acc = 0.0;
  for (int i = 0; i < n_samples; ++i) acc += speed_at(curve, static_cast<double>(i) / n_samples);
  return acc / n_samples;
}

double polygon_area(const std::vector<Vec2>& points) {
  double acc = 0.0;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) acc += cross(points[i], points[(i + 1) % n]);
  return 0.5 * acc;
}

std::vector<Vec2> sample_curve(const BoundaryCurve& curve, int n_samples) {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) out.push_back(curve.position(static_cast<double>(i) / n_samples));
  return out;
}

// ---------------------------------------------------------------------------

ArclengthTable::ArclengthTable(const BoundaryCurve& curve, int n_intervals) : curve_(curve) {
  cumulative_.resize(static_cast<std::size_t>(n_intervals) + 1, 0.0);
  for (int i = 0; i < n_intervals; ++i)
    cumulative_[i + 1] = cumulative_[i] + gauss_length(curve_, static_cast<double>(i) / n_intervals,
                                                       static_cast<double>(i + 1) / n_intervals);
}

double ArclengthTable::arclength_at(double t) const {
  const double w = wrap_unit(t);
  const auto n = cumulative_.size() - 1;
  const auto idx = std::min(n - 1, static_cast<std::size_t>(w * static_cast<double>(n)));
  const double a = static_cast<double>(idx) / static_cast<double>(n);
  return cumulative_[idx] + gauss_length(curve_, a, w);
}

double ArclengthTable::parameter_at(double s) const {
  const double total = length();
  double w = std::fmod(s, total);
  if (w < 0) w += total;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), w);
  const auto n = cumulative_.size() - 1;
  auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - cumulative_.begin()) - 1));
  idx = std::min(idx, n - 1);
  const double a = static_cast<double>(idx) / static_cast<double>(n);
  const double b = static_cast<double>(idx + 1) / static_cast<double>(n);
  const double target = w - cumulative_[idx];
  if (target <= 0.0) return a;
  auto f = [&](double t) { return gauss_length(curve_, a, t) - target; };
  auto df = [&](double t) { return speed_at(curve_, t); };
  if (f(b) <= 0.0) return b >= 1.0 ? 0.0 : b;
  return solve_bracketed(f, df, a, b, 1e-15);
}

std::vector<double> equispaced_parameters(const BoundaryCurve& curve, int n, double t_start) {
  ArclengthTable table(curve);
  const double s0 = table.arclength_at(t_start);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  out.push_back(wrap_unit(t_start));
  for (int i = 1; i < n; ++i) out.push_back(table.parameter_at(s0 + table.length() * i / n));
  return out;
}

// ---------------------------------------------------------------------------

CurveRegion::CurveRegion(const BoundaryCurve& curve) : curve_(curve) {
  constexpr int kSamples = 4096;
  Vec2 lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (int axis = 0; axis < 2; ++axis) {
    int imin = 0, imax = 0;
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (int i = 0; i < kSamples; ++i) {
      const double v = curve_.position(static_cast<double>(i) / kSamples)[axis];
      if (v < vmin) vmin = v, imin = i;
      if (v > vmax) vmax = v, imax = i;
    }
    auto refine = [&](int i0) {
      const double a = static_cast<double>(i0 - 1) / kSamples, b = static_cast<double>(i0 + 1) / kSamples;
      auto g = [&](double t) { return curve_.derivatives(t)[1][axis]; };
      auto dg = [&](double t) { return curve_.derivatives(t)[2][axis]; };
      double t = static_cast<double>(i0) / kSamples;
      if ((g(a) > 0.0) != (g(b) > 0.0)) t = solve_bracketed(g, dg, a, b, 1e-15);
      return wrap_unit(t);
    };
    t_min_[axis] = refine(imin);
    t_max_[axis] = refine(imax);
    lo[axis] = std::min(vmin, curve_.position(t_min_[axis])[axis]);
    hi[axis] = std::max(vmax, curve_.position(t_max_[axis])[axis]);
  }
  box_ = Eigen::AlignedBox2d(lo, hi);
}

std::optional<Chord> CurveRegion::chord(int axis, double level) const {
  if (!(level > box_.min()[axis] && level < box_.max()[axis])) return std::nullopt;
  const int other = 1 - axis;
  const double ta = t_min_[axis];
  double tb = t_max_[axis];
  if (tb < ta) tb += 1.0;
  auto g = [&](double t) { return curve_.position(t)[axis] - level; };
  auto dg = [&](double t) { return curve_.derivatives(t)[1][axis]; };
  const double r1 = solve_bracketed(g, dg, ta, tb, 1e-15);
  const double r2 = solve_bracketed(g, dg, tb, ta + 1.0, 1e-15);
  const double v1 = curve_.position(r1)[other];
  const double v2 = curve_.position(r2)[other];
  return Chord{std::min(v1, v2), std::max(v1, v2)};
}

std::optional<Chord> CurveRegion::chord_at_y(double y) const { return chord(1, y); }
std::optional<Chord> CurveRegion::chord_at_x(double x) const { return chord(0, x); }

PolygonRegion::PolygonRegion(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw GeometryError("PolygonRegion: need at least 3 vertices");
  if (polygon_area(vertices_) <= 0.0) throw GeometryError("PolygonRegion: vertices must be counterclockwise");
}

Eigen::AlignedBox2d PolygonRegion::bounding_box() const {
  Eigen::AlignedBox2d box;
  for (const auto& v : vertices_) box.extend(v);
  return box;
}

std::optional<Chord> PolygonRegion::chord(int axis, double level) const {
  const int other = 1 - axis;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const double da = a[axis] - level, db = b[axis] - level;
    if ((da < 0.0 && db < 0.0) || (da > 0.0 && db > 0.0) || da == db) continue;
    const double s = da / (da - db);
    const double v = a[other] + s * (b[other] - a[other]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) return std::nullopt;
  return Chord{lo, hi};
}

std::optional<Chord> PolygonRegion::chord_at_y(double y) const { return chord(1, y); }
std::optional<Chord> PolygonRegion::chord_at_x(double x) const { return chord(0, x); }

double PolygonRegion::inner_distance(const Vec2& p) const {
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 inward = Vec2(-e.y(), e.x()).normalized();
    d = std::min(d, inward.dot(p - vertices_[i]));
  }
  return d;
}

}  // namespace concave2d

#include "concave2d/contact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "concave2d/nelder_mead.hpp"
#include "concave2d/parallel.hpp"

namespace concave2d {

namespace {

constexpr double kPi = std::numbers::pi;

// Early-exit containment test used inside the search loops.
bool inside_all(const TangentEllipse& e, std::span<const Vec2> samples, double tol) {
  for (const auto& p : samples)
    if (e.quadratic_form(p) > tol) return false;
  return true;
}

}  // namespace

double TangentEllipse::quadratic_form(const Vec2& p) const {
  const double dx = p.x() - h, dy = p.y() - k;
  return a * a * dx * dx + b * dx * dy + c * c * dy * dy - 1.0;
}

TangentEllipse ellipse_from_params(double a, double b, double c) {
  if (!(a > 0.0) || !(c > 0.0)) throw GeometryError("tangent ellipse: a and c must be positive");
  const double D = 4.0 * a * a * c * c - b * b;
  if (!(D > 0.0)) throw GeometryError("tangent ellipse: degenerate discriminant D <= 0");
  const double sD = std::sqrt(D);
  TangentEllipse e;
  e.a = a;
  e.b = b;
  e.c = c;
  e.discriminant = D;
  e.h = -b / (a * sD);
  e.k = 2.0 * a / sD;
  e.area = 2.0 * kPi / sD;
  e.curvature = 2.0 * a * a * a / sD;
  e.curvature_ds = 6.0 * a * a * a * a * b / D;
  return e;
}

TangentEllipse ellipse_from_intrinsic(double curvature, double curvature_ds, double area) {
  if (!(curvature > 0.0) || !(area > 0.0)) throw GeometryError("tangent ellipse: K_E and A must be positive");
  const double sD = 2.0 * kPi / area;
  const double D = sD * sD;
  const double a = std::cbrt(kPi * curvature / area);
  const double b = curvature_ds * D / (6.0 * a * a * a * a);
  const double c = std::sqrt((D + b * b) / (4.0 * a * a));
  return ellipse_from_params(a, b, c);
}

std::vector<Vec2> frame_samples(const BoundaryCurve& curve, const PreferredFrame& frame, int n_samples) {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) out.push_back(frame.to_local(curve.position(static_cast<double>(i) / n_samples)));
  return out;
}

Containment ellipse_contains(const TangentEllipse& e, std::span<const Vec2> local_samples, double tol_contain) {
  double worst = 0.0;
  for (const auto& p : local_samples) worst = std::max(worst, e.quadratic_form(p));
  return {worst <= tol_contain, worst};
}

Containment ellipse_contains(const TangentEllipse& e, const BoundaryCurve& curve, const PreferredFrame& frame,
                             double tol_contain, int n_samples) {
  const auto samples = frame_samples(curve, frame, n_samples);
  return ellipse_contains(e, samples, tol_contain);
}

double cec_lhs(double curvature, double curvature_ds, double area) {
  const double k = curvature;
  return k * (std::pow(kPi, 2.0 / 3.0) / (std::pow(area, 2.0 / 3.0) * std::pow(k, 4.0 / 3.0)) + 1.0 +
              curvature_ds * curvature_ds / (9.0 * k * k * k * k));
}

double cec_rhs(double curvature, double curvature_ds) {
  const double k = curvature;
  return k * (1.0 + curvature_ds * curvature_ds / (9.0 * k * k * k * k));
}

double cec_margin(const LocalJet& jet, const TangentEllipse& e) {
  return cec_lhs(e.curvature, e.curvature_ds, e.area) - cec_rhs(jet.curvature, jet.curvature_ds);
}

double comparison_gradient_bound(const TangentEllipse& e) {
  return std::sqrt(e.discriminant) / (2.0 * e.a * (e.a * e.a + e.c * e.c));
}

double comparison_gradient_bound_intrinsic(const TangentEllipse& e) {
  return 1.0 / cec_lhs(e.curvature, e.curvature_ds, e.area);
}

// ---------------------------------------------------------------------------

CecResult cec_search_at(const BoundaryCurve& curve, double t, const CecSearchConfig& cfg) {
  CecResult res;
  res.t = t;
  res.jet = local_jet(curve, t);
  const double K = res.jet.curvature;
  if (!(K > 0.0)) return res;  // not strictly convex here: nothing to search

  const PreferredFrame frame = preferred_frame(res.jet);
  const auto samples = frame_samples(curve, frame, cfg.contain_samples);
  const double area = enclosed_area(curve);
  const double amax = cfg.area_max_factor * area;
  const double dk_max = cfg.curvature_ds_factor * std::max(1.0, std::abs(res.jet.curvature_ds));
  const double rhs = cec_rhs(K, res.jet.curvature_ds);

  struct Candidate {
    double kE, dkE, A, margin;
  };
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(cfg.grid_curvature * cfg.grid_curvature_ds * cfg.grid_area));
  const double log_ratio = std::log(amax / area);
  for (int i = 0; i < cfg.grid_curvature; ++i) {
    const double kE = K * (i + 1) / cfg.grid_curvature;
    for (int j = 0; j < cfg.grid_curvature_ds; ++j) {
      const double dkE = cfg.grid_curvature_ds > 1 ? -dk_max + 2.0 * dk_max * j / (cfg.grid_curvature_ds - 1) : 0.0;
      for (int l = 0; l < cfg.grid_area; ++l) {
        const double A = cfg.grid_area > 1 ? area * std::exp(log_ratio * l / (cfg.grid_area - 1)) : area;
        cands.push_back({kE, dkE, A, cec_lhs(kE, dkE, A) - rhs});
      }
    }
  }
  res.evaluations = static_cast<int>(cands.size());
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.margin != y.margin) return x.margin > y.margin;
    if (x.A != y.A) return x.A < y.A;
    return std::abs(x.dkE) < std::abs(y.dkE);
  });

  std::optional<Candidate> best;
  for (const auto& cnd : cands) {
    ++res.containment_checks;
    if (inside_all(ellipse_from_intrinsic(cnd.kE, cnd.dkE, cnd.A), samples, cfg.tol_contain)) {
      best = cnd;
      break;
    }
  }
  if (!best) return res;

  // Local refinement in scaled coordinates (K_E / K, dK_E / dk_max, log(A / area)).
  if (cfg.refine_iterations > 0) {
    auto objective = [&](const std::vector<double>& z) {
      const double kE = z[0] * K, dkE = z[1] * dk_max, A = area * std::exp(z[2]);
      // bounds carry a little slack: grid points round-trip through the scaling inexactly
      constexpr double slack = 1e-12;
      if (!(z[0] > 0.0 && z[0] <= 1.0 + slack) || std::abs(z[1]) > 1.0 + slack || z[2] < -slack ||
          z[2] > log_ratio + slack)
        return std::numeric_limits<double>::infinity();
      ++res.containment_checks;
      if (!inside_all(ellipse_from_intrinsic(kE, dkE, A), samples, cfg.tol_contain))
        return std::numeric_limits<double>::infinity();
      return -(cec_lhs(kE, dkE, A) - rhs);
    };
    const std::vector<double> start = {best->kE / K, best->dkE / dk_max, std::log(best->A / area)};
    const std::vector<double> steps = {
        0.5 / cfg.grid_curvature, cfg.grid_curvature_ds > 1 ? 1.0 / (cfg.grid_curvature_ds - 1) : 0.05,
        cfg.grid_area > 1 ? 0.5 * log_ratio / (cfg.grid_area - 1) : 0.05};
    const auto nm = nelder_mead(objective, start, steps, cfg.refine_iterations);
    res.evaluations += nm.evaluations;
    if (std::isfinite(nm.value) && -nm.value > best->margin) {
      best = Candidate{nm.x[0] * K, nm.x[1] * dk_max, area * std::exp(nm.x[2]), -nm.value};
      res.refined = true;
    }
  }

  const TangentEllipse e = ellipse_from_intrinsic(best->kE, best->dkE, best->A);
  const Containment cont = ellipse_contains(e, samples, cfg.tol_contain);
  res.best_ellipse = e;
  res.margin = cec_margin(res.jet, e);
  res.max_violation = cont.max_violation;
  res.feasible = cont.contained && res.margin >= -cfg.tol_margin;
  return res;
}

CecDomainReport cec_check_domain(const BoundaryCurve& curve, int n_points, const CecSearchConfig& config) {
  const auto params = equispaced_parameters(curve, n_points);
  CecDomainReport rep;
  rep.points.resize(params.size());
  parallel_for(params.size(), [&](std::size_t i) { rep.points[i] = cec_search_at(curve, params[i], config); });
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    rep.min_margin = std::min(rep.min_margin, rep.points[i].margin);
    if (!rep.points[i].feasible) rep.not_certified.push_back(i);
  }
  return rep;
}

// ---------------------------------------------------------------------------

double ContactParabola::level(const Vec2& p) const {
  const double s = A * p.x() + B * p.y();
  return p.y() - s * s;
}

double ContactParabola::graph(double x) const {
  const double disc = 1.0 - 4.0 * A * B * x;
  if (disc < 0.0) throw GeometryError("contact parabola: abscissa beyond the vertical tangent");
  return 2.0 * A * A * x * x / ((1.0 - 2.0 * A * B * x) + std::sqrt(disc));
}

ContactParabola cpc_parabola_at(double rho2, double rho3) {
  if (!(rho2 > 0.0)) throw GeometryError("contact parabola: flat contact, rho''(0) must be positive");
  ContactParabola p;
  p.A = std::sqrt(0.5 * rho2);
  p.B = rho3 / (12.0 * p.A * p.A * p.A);
  return p;
}

ContactParabola cpc_parabola_at(const LocalJet& jet) { return cpc_parabola_at(jet.curvature, jet.curvature_ds); }

Containment cpc_contains(const ContactParabola& parabola, std::span<const Vec2> local_samples, double tol) {
  double worst = 0.0;
  for (const auto& p : local_samples) worst = std::max(worst, -parabola.level(p));
  return {worst <= tol, worst};
}

Containment cpc_contains(const ContactParabola& parabola, const BoundaryCurve& curve, const PreferredFrame& frame,
                         double tol, int n_samples) {
  const auto samples = frame_samples(curve, frame, n_samples);
  return cpc_contains(parabola, samples, tol);
}

CpcPoint cpc_check_at(const BoundaryCurve& curve, double t, double tol, int n_samples) {
  CpcPoint pt;
  pt.t = t;
  pt.jet = local_jet(curve, t);
  pt.parabola = cpc_parabola_at(pt.jet);
  pt.containment = cpc_contains(pt.parabola, curve, preferred_frame(pt.jet), tol, n_samples);
  return pt;
}

CpcDomainReport cpc_check_domain(const BoundaryCurve& curve, int n_points, double tol, int n_samples) {
  const auto params = equispaced_parameters(curve, n_points);
  CpcDomainReport rep;
  rep.points.resize(params.size());
  parallel_for(params.size(), [&](std::size_t i) { rep.points[i] = cpc_check_at(curve, params[i], tol, n_samples); });
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    rep.max_violation = std::max(rep.max_violation, rep.points[i].containment.max_violation);
    if (!rep.points[i].containment.contained) rep.violated.push_back(i);
  }
  return rep;
}

}  // namespace concave2d

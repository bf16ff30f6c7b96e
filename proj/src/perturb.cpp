#include "concave2d/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "concave2d/series.hpp"

namespace concave2d {

namespace {

using S4 = Series<4>;
constexpr double kPi = std::numbers::pi;

S4 transition_phi(const S4& s) { return exp(-reciprocal(s)); }

}  // namespace

std::array<double, 5> bump_eval(double x) {
  const double ax = std::abs(x);
  if (ax <= 0.5) return {1.0, 0.0, 0.0, 0.0, 0.0};
  if (ax >= 1.0) return {0.0, 0.0, 0.0, 0.0, 0.0};
  // S(s) = phi(s) / (phi(s) + phi(1 - s)), phi(s) = exp(-1/s), with s = 2 (1 - |x|).
  const double sign = x > 0.0 ? 1.0 : -1.0;
  const S4 s = 2.0 - 2.0 * sign * S4::variable(x);
  const S4 p = transition_phi(s), q = transition_phi(1.0 - s);
  return (p / (p + q)).derivatives();
}

std::array<double, 5> deviation(double x, double a, double c) {
  const auto z = bump_eval(x / c);
  std::array<double, 5> zd{};
  double scale = 1.0;
  for (int k = 0; k <= 4; ++k) {
    zd[k] = z[k] * scale;
    scale /= c;
  }
  const S4 xs = S4::variable(x);
  const S4 x2 = xs * xs;
  return (-a * S4::from_derivatives(zd) * (x2 * x2)).derivatives();
}

double auto_amplitude(const BoundaryCurve& base, double t_p, double c) {
  if (!(c > 0.0)) throw GeometryError("auto amplitude: c must be positive");
  const LocalGraph graph = local_graph(base, t_p, 0.5 * c);
  const auto d0 = graph.derivatives(0.0);
  const ContactParabola P = cpc_parabola_at(d0[2], d0[3]);
  // x -> 0 limit of the quotient: rho''''(0)/24 minus the x^4 coefficient 5 A^4 B^2 of P.
  const double A2 = P.A * P.A;
  double sup = d0[4] / 24.0 - 5.0 * A2 * A2 * P.B * P.B;
  constexpr int half = 256;
  for (int k = 1; k <= half; ++k)
    for (double sign : {-1.0, 1.0}) {
      const double x = sign * 0.5 * c * k / half;
      const double x4 = x * x * x * x;
      if (x4 < 1e-10) continue;  // rho - P cancels to roundoff there; the limit above covers it
      sup = std::max(sup, (graph(x) - P.graph(x)) / x4);
    }
  if (!std::isfinite(sup)) throw GeometryError("auto amplitude: quotient is not finite (window too large)");
  // A base already outside its parabola (sup < 0) is violated by any positive a.
  const double a = 2.0 * std::abs(sup);
  if (!(a > 0.0)) throw GeometryError("auto amplitude: degenerate quotient");
  return a;
}

PerturbedDomain perturb_domain(const BoundaryCurve& base, double t_p, double c, double a,
                               const PerturbConfig& config) {
  if (!(a > 0.0) || !(c > 0.0)) throw GeometryError("perturb: a and c must be positive");
  if (config.samples < 512) throw GeometryError("perturb: at least 512 samples required");
  PerturbedDomain pd{.base = base,
                     .curve = base,
                     .t_p = t_p,
                     .c = c,
                     .a = a,
                     .frame = preferred_frame(base, t_p),
                     .base_graph = local_graph(base, t_p, c)};
  const int n = config.samples;
  const double g = config.grading;
  std::vector<Vec2> pts(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double tau = static_cast<double>(k) / n;
    const double t = t_p + tau - g / (2.0 * kPi) * std::sin(2.0 * kPi * tau);
    const double dt = std::remainder(t - t_p, 1.0);
    Vec2 X = pd.frame.to_local(base.position(t));
    if (std::abs(dt) < 0.25 && std::abs(X.x()) < c) X.y() += deviation(X.x(), a, c)[0];
    pts[static_cast<std::size_t>(k)] = pd.frame.to_world(X);
  }
  pd.curve = curve_from_spec(DomainSpec{SampledSpec{std::move(pts)}, {}});
  pd.min_curvature = convexity_check(pd.curve, 4 * n);
  if (!(pd.min_curvature > 0.0))
    throw GeometryError("perturb: perturbed curve is not convex (a c^2 too large)");
  return pd;
}

std::array<double, 5> PerturbedDomain::graph_derivatives(double x) const {
  auto r = base_graph.derivatives(x);
  const auto d = deviation(x, a, c);
  for (int k = 0; k < 5; ++k) r[k] += d[k];
  return r;
}

C3GammaNorms c3gamma_distance(const PerturbedDomain& pd, double gamma, int n) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("c3gamma: gamma must lie in (0, 1)");
  C3GammaNorms out;
  out.gamma = gamma;
  std::vector<double> xs(static_cast<std::size_t>(n)), d3(xs.size());
  for (int i = 0; i < n; ++i) {
    const double x = -pd.c + 2.0 * pd.c * i / (n - 1);
    const auto d = deviation(x, pd.a, pd.c);
    for (int k = 0; k < 4; ++k) out.sup[k] = std::max(out.sup[k], std::abs(d[k]));
    xs[i] = x;
    d3[i] = d[3];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.holder = std::max(out.holder, std::abs(d3[i] - d3[j]) / std::pow(xs[j] - xs[i], gamma));
  return out;
}

double containment_violation(const BoundaryCurve& inner, const BoundaryCurve& outer, int n) {
  std::vector<Vec2> p(n), nrm(n);
  for (int i = 0; i < n; ++i) {
    const LocalJet j = local_jet(outer, static_cast<double>(i) / n);
    p[i] = j.point;
    nrm[i] = j.inward_normal;
  }
  const auto q = sample_curve(inner, n);
  double worst = 0.0;
  for (const auto& qi : q)
    for (int i = 0; i < n; ++i) worst = std::max(worst, -(qi - p[i]).dot(nrm[i]));
  return worst;
}

PerturbationVerification verify_perturbation(const PerturbedDomain& pd, double gamma, int cec_points,
                                             const CecSearchConfig& cec) {
  PerturbationVerification v;
  v.min_curvature = convexity_check(pd.curve, 16384);
  v.convex = v.min_curvature > 0.0;
  v.containment_violation = containment_violation(pd.base, pd.curve);
  v.contains_base = v.containment_violation <= 1e-9;

  // The deviation is O(x^4), so the contact parabola at t_p is rebuilt from Omega_c's own jet.
  const LocalJet jet = local_jet(pd.curve, 0.0);
  const Containment cpc = cpc_contains(cpc_parabola_at(jet), pd.curve, preferred_frame(jet), 0.0, 8192);
  v.cpc_violation = cpc.max_violation;
  v.cpc_violated_at_tp = cpc.max_violation > 1e-12;

  const CecDomainReport rep = cec_check_domain(pd.curve, cec_points, cec);
  v.cec_min_margin = rep.min_margin;
  v.cec_feasible = rep.all_feasible() && rep.min_margin > 0.0;
  v.distances = c3gamma_distance(pd, gamma);
  return v;
}

AdmissibleScale admissible_scale(const BoundaryCurve& base, double t_p, int max_halvings) {
  for (int j = 0; j <= max_halvings; ++j) {
    const double c = 0.4 * std::ldexp(1.0, -j);
    try {
      perturb_domain(base, t_p, c, auto_amplitude(base, t_p, c));
      return {c, j};
    } catch (const GeometryError&) {
    }
  }
  throw GeometryError("admissible scale: no admissible c found");
}

}  // namespace concave2d

#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "concave2d/geometry.hpp"

namespace concave2d {

/// Ellipse a^2 (x-h)^2 + b (x-h)(y-k) + c^2 (y-k)^2 = 1 through the origin of a
/// preferred frame with horizontal tangent there, lying in y >= 0.
struct TangentEllipse {
  double a = 1.0, b = 0.0, c = 1.0;
  double h = 0.0, k = 1.0;
  double discriminant = 4.0;  // D = 4a^2c^2 - b^2
  double area = 0.0;          // 2 pi / sqrt(D)
  double curvature = 1.0;     // K_E at the contact point
  double curvature_ds = 0.0;  // dK_E/ds at the contact point

  /// Q(x, y) = a^2 (x-h)^2 + b (x-h)(y-k) + c^2 (y-k)^2 - 1; negative inside.
  double quadratic_form(const Vec2& p) const;
  Vec2 center() const { return {h, k}; }
};

TangentEllipse ellipse_from_params(double a, double b, double c);
TangentEllipse ellipse_from_intrinsic(double curvature, double curvature_ds, double area);

struct Containment {
  bool contained = false;
  double max_violation = 0.0;  // >= 0; zero when every sample is inside
};

/// Boundary samples of the curve expressed in the frame.
std::vector<Vec2> frame_samples(const BoundaryCurve& curve, const PreferredFrame& frame, int n_samples = 2048);

Containment ellipse_contains(const TangentEllipse& e, std::span<const Vec2> local_samples, double tol_contain);
Containment ellipse_contains(const TangentEllipse& e, const BoundaryCurve& curve, const PreferredFrame& frame,
                             double tol_contain, int n_samples = 2048);

/// LHS - RHS of the contact-ellipse curvature inequality at the contact point.
double cec_margin(const LocalJet& jet, const TangentEllipse& e);
/// K_E (pi^{2/3}/(A^{2/3} K_E^{4/3}) + 1 + (dK_E/ds)^2/(9 K_E^4)), the left-hand side.
double cec_lhs(double curvature, double curvature_ds, double area);
/// K (1 + (dK/ds)^2/(9 K^4)), the right-hand side.
double cec_rhs(double curvature, double curvature_ds);

/// Normal derivative at the contact point of the quadratic w with -Laplace(w) = 1
/// vanishing on the ellipse: sqrt(D) / (2a(a^2 + c^2)).
double comparison_gradient_bound(const TangentEllipse& e);
/// The same quantity written through (K_E, dK_E/ds, A): 1 / cec_lhs.
double comparison_gradient_bound_intrinsic(const TangentEllipse& e);

struct CecSearchConfig {
  int grid_curvature = 24;
  int grid_curvature_ds = 25;
  int grid_area = 24;
  int refine_iterations = 200;
  double tol_margin = 1e-9;
  double tol_contain = 1e-9;
  int contain_samples = 2048;
  double area_max_factor = 50.0;     // A_max = factor * area(domain)
  double curvature_ds_factor = 10.0; // |dK_E/ds| <= factor * max(1, |dK/ds|)
};

struct CecResult {
  double t = 0.0;
  LocalJet jet;
  bool feasible = false;
  double margin = -std::numeric_limits<double>::infinity();
  std::optional<TangentEllipse> best_ellipse;
  int evaluations = 0;
  int containment_checks = 0;
  double max_violation = 0.0;  // of the best candidate
  bool refined = false;
};

CecResult cec_search_at(const BoundaryCurve& curve, double t, const CecSearchConfig& config = {});

struct CecDomainReport {
  std::vector<CecResult> points;
  double min_margin = 0.0;
  std::vector<std::size_t> not_certified;  // indices with feasible == false
  bool all_feasible() const { return not_certified.empty(); }
};

/// Searches at n_points boundary points equispaced in arclength from t = 0.
CecDomainReport cec_check_domain(const BoundaryCurve& curve, int n_points, const CecSearchConfig& config = {});

/// Parabola y = (A x + B y)^2 with third-order contact at the origin.
struct ContactParabola {
  double A = 1.0;
  double B = 0.0;

  /// F(x, y) = y - (A x + B y)^2; the region {F >= 0} is convex.
  double level(const Vec2& p) const;
  /// Lower branch y = P(x) through the origin; requires 1 - 4ABx >= 0.
  double graph(double x) const;
};

/// From rho''(0), rho'''(0): 2A^2 = rho'', 12 A^3 B = rho'''.
ContactParabola cpc_parabola_at(double rho2, double rho3);
ContactParabola cpc_parabola_at(const LocalJet& jet);

Containment cpc_contains(const ContactParabola& parabola, std::span<const Vec2> local_samples, double tol);
Containment cpc_contains(const ContactParabola& parabola, const BoundaryCurve& curve, const PreferredFrame& frame,
                         double tol, int n_samples = 2048);

struct CpcPoint {
  double t = 0.0;
  LocalJet jet;
  ContactParabola parabola;
  Containment containment;
};

struct CpcDomainReport {
  std::vector<CpcPoint> points;
  double max_violation = 0.0;
  std::vector<std::size_t> violated;
  bool holds() const { return violated.empty(); }
};

CpcDomainReport cpc_check_domain(const BoundaryCurve& curve, int n_points, double tol = 1e-8, int n_samples = 2048);
CpcPoint cpc_check_at(const BoundaryCurve& curve, double t, double tol = 1e-8, int n_samples = 2048);

}  // namespace concave2d

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "concave2d/spline.hpp"

namespace concave2d {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Malformed or degenerate domain description, or a geometric query that
/// the curve cannot answer (zero speed, window too wide, ...).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Domain specs

/// Axis-aligned ellipse x = p cos(2 pi t), y = q sin(2 pi t).
struct EllipseSpec {
  double p = 1.0;
  double q = 1.0;
};

/// r(theta) = r0 + sum_k cos_coeffs[k-1] cos(k theta) + sin_coeffs[k-1] sin(k theta).
struct PolarFourierSpec {
  double r0 = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// Closed counterclockwise point list, interpolated by a periodic quintic spline
/// with parameter t = i / n at points[i].
struct SampledSpec {
  std::vector<Vec2> points;
};

/// world = center + scale * Rot(rotation) * local
struct Similarity {
  double scale = 1.0;
  double rotation = 0.0;
  Vec2 center = Vec2::Zero();

  Vec2 apply(const Vec2& local) const;
  Vec2 apply_linear(const Vec2& v) const;
};

struct DomainSpec {
  std::variant<EllipseSpec, PolarFourierSpec, SampledSpec> shape;
  Similarity transform;

  std::string kind() const;
};

// ---------------------------------------------------------------------------

/// Closed, counterclockwise, smooth boundary curve with parameter t in [0, 1).
class BoundaryCurve {
 public:
  /// position and its t-derivatives of order 0..4
  using Derivatives = std::array<Vec2, 5>;

  const DomainSpec& spec() const { return spec_; }

  Derivatives derivatives(double t) const;
  Vec2 position(double t) const { return derivatives(t)[0]; }

 private:
  friend BoundaryCurve curve_from_spec(const DomainSpec& spec);
  explicit BoundaryCurve(DomainSpec spec);

  Derivatives local_derivatives(double t) const;

  DomainSpec spec_;
  std::shared_ptr<const PeriodicQuinticSpline> spline_x_;
  std::shared_ptr<const PeriodicQuinticSpline> spline_y_;
};

/// Validates the spec and builds an evaluable curve. Convexity is not checked here.
BoundaryCurve curve_from_spec(const DomainSpec& spec);

struct LocalJet {
  double t = 0.0;
  Vec2 point = Vec2::Zero();
  Vec2 tangent = Vec2::UnitX();
  Vec2 inward_normal = Vec2::UnitY();
  double curvature = 0.0;     // K
  double curvature_ds = 0.0;  // dK/ds along the counterclockwise orientation
  double speed = 0.0;         // |dx/dt|
};

LocalJet local_jet(const BoundaryCurve& curve, double t);

/// Rigid frame at a boundary point: the point is the origin, the
/// counterclockwise tangent is +x and the inward normal is +y.
struct PreferredFrame {
  Vec2 origin = Vec2::Zero();
  Mat2 rotation = Mat2::Identity();  // rows: tangent, inward normal

  Vec2 to_local(const Vec2& world) const { return rotation * (world - origin); }
  Vec2 to_world(const Vec2& local) const { return origin + rotation.transpose() * local; }
  Vec2 vector_to_local(const Vec2& v) const { return rotation * v; }
};

PreferredFrame preferred_frame(const BoundaryCurve& curve, double t);
PreferredFrame preferred_frame(const LocalJet& jet);

/// The boundary near a point as a graph y = rho(x) in the preferred frame,
/// valid for |x| <= halfwidth.
class LocalGraph {
 public:
  const PreferredFrame& frame() const { return frame_; }
  double halfwidth() const { return halfwidth_; }
  double t0() const { return t0_; }
  /// Parameter interval (possibly extending past [0,1)) covering |x| <= halfwidth.
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }

  /// rho(x), rho'(x), ..., rho''''(x)
  std::array<double, 5> derivatives(double x) const;
  double operator()(double x) const { return derivatives(x)[0]; }

  /// Curve parameter whose local abscissa is x.
  double parameter_at(double x) const;

 private:
  friend LocalGraph local_graph(const BoundaryCurve& curve, double t, double halfwidth);
  LocalGraph(const BoundaryCurve& curve, double t, double halfwidth);

  BoundaryCurve curve_;
  PreferredFrame frame_;
  double t0_, halfwidth_, t_lo_, t_hi_;
};

/// Rejects windows in which the local tangent slope exceeds 10 in magnitude.
LocalGraph local_graph(const BoundaryCurve& curve, double t, double halfwidth);

/// Graph derivatives rho^(k) at the abscissa of parameter s, for the frame.
std::array<double, 5> graph_derivatives_at(const BoundaryCurve& curve, const PreferredFrame& frame,
                                           double s);

double convexity_check(const BoundaryCurve& curve, int n_samples = 1024);
double enclosed_area(const BoundaryCurve& curve, int n_samples = 4096);
double total_curvature(const BoundaryCurve& curve, int n_samples = 4096);
double perimeter(const BoundaryCurve& curve, int n_samples = 4096);

/// Shoelace signed area of a closed polygon.
double polygon_area(const std::vector<Vec2>& points);

std::vector<Vec2> sample_curve(const BoundaryCurve& curve, int n_samples);

/// Cumulative arclength table for inverting s(t).
class ArclengthTable {
 public:
  explicit ArclengthTable(const BoundaryCurve& curve, int n_intervals = 2048);
  double length() const { return cumulative_.back(); }
  double arclength_at(double t) const;
  double parameter_at(double s) const;

 private:
  BoundaryCurve curve_;
  std::vector<double> cumulative_;
};

/// n parameters equispaced in arclength starting at t_start.
std::vector<double> equispaced_parameters(const BoundaryCurve& curve, int n, double t_start = 0.0);

/// Horizontal/vertical chords of a convex curve, used for grid construction.
struct Chord {
  double lo;
  double hi;
};

/// Bounding box and chord queries for the region enclosed by a convex curve.
class ConvexRegion {
 public:
  virtual ~ConvexRegion() = default;
  virtual Eigen::AlignedBox2d bounding_box() const = 0;
  /// x-interval of the horizontal line at height y, if it meets the region interior.
  virtual std::optional<Chord> chord_at_y(double y) const = 0;
  /// y-interval of the vertical line at abscissa x.
  virtual std::optional<Chord> chord_at_x(double x) const = 0;
};

/// Chords computed by safeguarded Newton root-finding on the curve.
class CurveRegion final : public ConvexRegion {
 public:
  explicit CurveRegion(const BoundaryCurve& curve);
  Eigen::AlignedBox2d bounding_box() const override { return box_; }
  std::optional<Chord> chord_at_y(double y) const override;
  std::optional<Chord> chord_at_x(double x) const override;

 private:
  std::optional<Chord> chord(int axis, double level) const;

  BoundaryCurve curve_;
  // parameters of the extreme points along x (axis 0) and y (axis 1)
  std::array<double, 2> t_min_{}, t_max_{};
  Eigen::AlignedBox2d box_;
};

/// Convex polygon given counterclockwise.
class PolygonRegion final : public ConvexRegion {
 public:
  explicit PolygonRegion(std::vector<Vec2> vertices);
  Eigen::AlignedBox2d bounding_box() const override;
  std::optional<Chord> chord_at_y(double y) const override;
  std::optional<Chord> chord_at_x(double x) const override;
  const std::vector<Vec2>& vertices() const { return vertices_; }
  /// Signed distance to the nearest edge line (positive inside).
  double inner_distance(const Vec2& p) const;

 private:
  std::optional<Chord> chord(int axis, double level) const;
  std::vector<Vec2> vertices_;
};

/// Finds the root of a monotone function on [lo, hi] (sign change required)
/// by Newton steps safeguarded with bisection.
template <typename F, typename DF>
double solve_bracketed(F&& f, DF&& df, double lo, double hi, double tol = 1e-15);

}  // namespace concave2d

#include "concave2d/geometry_impl.hpp"

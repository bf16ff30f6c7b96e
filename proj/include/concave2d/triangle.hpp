#pragma once

#include <vector>

#include "concave2d/geometry.hpp"
#include "concave2d/pde.hpp"

namespace concave2d {

struct TriangleLevelsetConfig {
  double epsilon_fraction = 0.02;  // epsilon = fraction * max u on the triangle
  double grid_h = 1.0 / 256.0;
  double smoothing = 0.01;         // Gaussian width, in arclength, of the tangent-angle smoothing
  int samples = 2048;              // points of the resulting sampled curve
  int rays = 4096;                 // contour samples
};

struct TriangleLevelset {
  BoundaryCurve curve;
  double epsilon = 0.0;
  double triangle_max_u = 0.0;
  std::vector<Vec2> contour;  // level epsilon points (grid-line crossings and rays)
  std::vector<Vec2> hull;     // convex hull of the contour
  double min_curvature = 0.0;
};

/// Equilateral triangle with side 1: (0,0), (1,0), (1/2, sqrt(3)/2).
std::vector<Vec2> unit_triangle();

/// Level epsilon crossings of the grid solution along grid rows and columns,
/// located with cubic interpolation through the nearest samples (boundary
/// points count as samples with u = 0).
std::vector<Vec2> level_crossings(const GridSolution& sol, double level);

/// Points of the level curve on rays from the grid maximum, found by marching
/// outward in steps of h/2 on the bicubic interpolant and then bisecting.
/// Rays that reach a cell without an interior interpolation block are skipped.
std::vector<Vec2> level_curve_rays(const GridSolution& sol, double level, int rays);

/// Counterclockwise convex hull (monotone chain), collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Smooth convex closed curve approximating a counterclockwise convex polygon:
/// the tangent angle, as a function of arclength, is convolved with a Gaussian
/// of the given width, then the curve is scaled to the polygon's area and
/// centroid. Samples are equally spaced in arclength.
std::vector<Vec2> smooth_convex_polygon(const std::vector<Vec2>& polygon, double width, int samples);

/// Superlevel set {u >= epsilon} of the triangle torsion function as a smooth convex curve.
TriangleLevelset triangle_levelset_domain(const TriangleLevelsetConfig& config = {});

}  // namespace concave2d

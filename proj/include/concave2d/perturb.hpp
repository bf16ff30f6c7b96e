#pragma once

#include <array>
#include <vector>

#include "concave2d/contact.hpp"
#include "concave2d/geometry.hpp"

namespace concave2d {

/// Smooth even cutoff: 1 on [-1/2, 1/2], 0 outside (-1, 1), monotone in between.
/// Returns zeta(x) and its first four derivatives.
std::array<double, 5> bump_eval(double x);

/// Deviation -a zeta(x/c) x^4 and its derivatives of order 0..4.
std::array<double, 5> deviation(double x, double a, double c);

/// 2 sup over 0 < |x| <= c/2 of (rho(x) - P(x)) / x^4, P the contact parabola at t_p.
double auto_amplitude(const BoundaryCurve& base, double t_p, double c);

struct PerturbedDomain {
  BoundaryCurve base;
  BoundaryCurve curve;  // sampled; parameter 0 is the contact point
  double t_p = 0.0;     // contact parameter on the base curve
  double c = 0.0;
  double a = 0.0;
  PreferredFrame frame;  // preferred frame of the base at t_p (shared by both curves)
  LocalGraph base_graph; // rho on |x| <= c
  double min_curvature = 0.0;

  /// rho_c = rho - a zeta(x/c) x^4 and its derivatives, from the closed forms
  /// (no resampling involved).
  std::array<double, 5> graph_derivatives(double x) const;
};

struct PerturbConfig {
  int samples = 4096;
  double grading = 7.0 / 9.0;  // sample density at t_p is (1 + g) / (1 - g) times the sparsest
};

/// Replaces the boundary near t_p by rho(x) - a zeta(x/c) x^4 and resamples.
/// Throws GeometryError when the result is not convex.
PerturbedDomain perturb_domain(const BoundaryCurve& base, double t_p, double c, double a,
                               const PerturbConfig& config = {});

struct C3GammaNorms {
  std::array<double, 4> sup{};  // sup |d^(k)| for k = 0..3
  double holder = 0.0;          // gamma-Hoelder seminorm of d'''
  double gamma = 0.5;
};

/// Norms of the closed-form deviation sampled at n points over [-c, c].
C3GammaNorms c3gamma_distance(const PerturbedDomain& pd, double gamma, int n = 4096);

/// Largest depth by which base points leave Omega_c, measured against the
/// tangent half-planes of the perturbed curve.
double containment_violation(const BoundaryCurve& inner, const BoundaryCurve& outer, int n = 2048);

struct PerturbationVerification {
  bool convex = false;
  double min_curvature = 0.0;
  bool contains_base = false;
  double containment_violation = 0.0;
  bool cpc_violated_at_tp = false;
  double cpc_violation = 0.0;
  bool cec_feasible = false;
  double cec_min_margin = 0.0;
  C3GammaNorms distances;
};

PerturbationVerification verify_perturbation(const PerturbedDomain& pd, double gamma = 0.5, int cec_points = 32,
                                             const CecSearchConfig& cec = {});

/// Largest c in {0.4 * 2^-j} for which the graph window is valid and the auto-amplitude perturbation is convex.
struct AdmissibleScale {
  double c0 = 0.0;
  int halvings = 0;
};

AdmissibleScale admissible_scale(const BoundaryCurve& base, double t_p, int max_halvings = 10);

}  // namespace concave2d

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "concave2d/perturb.hpp"

using namespace concave2d;

namespace {

BoundaryCurve ellipse(double p, double q) { return curve_from_spec({EllipseSpec{p, q}, {}}); }

// Central differences of a scalar function, step e.
template <typename F>
double fd1(F&& f, double x, double e) {
  return (f(x + e) - f(x - e)) / (2 * e);
}

}  // namespace

TEST_SUITE("perturb") {
  TEST_CASE("bump values") {
    CHECK(bump_eval(0.0)[0] == 1.0);
    CHECK(bump_eval(0.4)[0] == 1.0);
    CHECK(bump_eval(-0.5)[0] == 1.0);
    for (double x : {1.0, -1.0, 1.3}) {
      const auto z = bump_eval(x);
      for (double v : z) CHECK(v == 0.0);
    }
    double prev = 1.0;
    for (int i = 1; i < 200; ++i) {
      const double x = 0.5 + 0.5 * i / 200;
      const auto z = bump_eval(x);
      CHECK(z[0] <= prev);
      CHECK(z[0] >= 0.0);
      CHECK(z[0] == doctest::Approx(bump_eval(-x)[0]).epsilon(1e-15));
      prev = z[0];
    }
  }

  TEST_CASE("bump derivatives match differences and vanish at the transition ends") {
    for (double x : {0.55, 0.7, 0.75, 0.9, -0.62}) {
      const auto z = bump_eval(x);
      for (int k = 0; k < 4; ++k) {
        const double d = fd1([k](double s) { return bump_eval(s)[k]; }, x, 1e-6);
        CHECK(z[k + 1] == doctest::Approx(d).epsilon(1e-5).scale(1.0));
      }
    }
    for (double x : {0.5 + 1e-3, 1 - 1e-3}) {
      const auto z = bump_eval(x);
      for (int k = 1; k <= 4; ++k) CHECK(std::abs(z[k]) < 1e-6);
    }
  }

  TEST_CASE("deviation derivatives match differences") {
    const double a = 0.25, c = 0.2;
    for (double x : {0.01, 0.08, 0.13, 0.17, -0.15}) {
      const auto d = deviation(x, a, c);
      CHECK(d[0] <= 0.0);
      for (int k = 0; k < 4; ++k) {
        const double fd = fd1([&](double s) { return deviation(s, a, c)[k]; }, x, 1e-6);
        CHECK(std::abs(d[k + 1] - fd) < 1e-5 * (1 + std::abs(fd)));
      }
    }
    CHECK(deviation(0.1, a, c)[0] == doctest::Approx(-a * 1e-4));
    for (double v : deviation(0.25, a, c)) CHECK(v == 0.0);
  }

  TEST_CASE("automatic amplitude") {
    const auto disc = ellipse(1, 1);
    CHECK(auto_amplitude(disc, 0.75, 0.2) == doctest::Approx(0.25).epsilon(0.01));
    CHECK(auto_amplitude(disc, 0.75, 0.1) == doctest::Approx(0.25).epsilon(0.005));
    const double ae = auto_amplitude(ellipse(2, 1), 0.75, 0.2);
    CHECK(std::isfinite(ae));
    CHECK(ae > 0.0);
    CHECK_THROWS_AS(auto_amplitude(disc, 0.75, 0.0), GeometryError);
  }

  TEST_CASE("perturbed disc: shape, containment, jet") {
    const auto disc = ellipse(1, 1);
    const double c = 0.2, a = auto_amplitude(disc, 0.75, c);
    const auto pd = perturb_domain(disc, 0.75, c, a);
    CHECK(pd.min_curvature > 0.0);
    CHECK(containment_violation(disc, pd.curve) <= 1e-9);

    // samples outside the window are base points
    const int n = 4096;
    const double g = 7.0 / 9.0;
    for (int k = 0; k < n; k += 97) {
      const double tau = static_cast<double>(k) / n;
      const double t = 0.75 + tau - g / (2 * std::numbers::pi) * std::sin(2 * std::numbers::pi * tau);
      const Vec2 local = pd.frame.to_local(disc.position(t));
      if (std::abs(local.x()) < c && std::abs(std::remainder(t - 0.75, 1.0)) < 0.25) continue;
      CHECK((pd.curve.position(tau) - disc.position(t)).norm() < 1e-14);
    }

    // closed-form jet of the perturbed graph equals the base jet up to order 3
    const auto base = pd.base_graph.derivatives(0.0);
    const auto pert = pd.graph_derivatives(0.0);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(pert[k] - base[k]) <= 1e-9);
    CHECK(pert[4] == doctest::Approx(base[4] - 24 * a).epsilon(1e-12));

    // The resampled spline reproduces the jet to the accuracy its sampling allows:
    // third-derivative noise grows like roundoff / spacing^3 with spacing ~ 1.5e-3 / 8.
    const auto jet = local_jet(pd.curve, 0.0);
    CHECK(jet.curvature == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(jet.curvature_ds) < 1e-4);
    CHECK((jet.point - disc.position(0.75)).norm() < 1e-14);

    // deviation sign: rho_c <= rho across the window
    const auto gp = local_graph(pd.curve, 0.0, c);
    for (int i = -20; i <= 20; ++i) {
      const double x = c * i / 20.0;
      CHECK(gp(x) <= pd.base_graph(x) + 1e-12);
      CHECK(gp(x) == doctest::Approx(pd.graph_derivatives(x)[0]).epsilon(1e-9).scale(1e-6));
    }
  }

  TEST_CASE("verification over a c sweep") {
    const auto disc = ellipse(1, 1);
    std::vector<C3GammaNorms> norms;
    for (double c : {0.2, 0.1, 0.05}) {
      const double a = auto_amplitude(disc, 0.75, c);
      const auto pd = perturb_domain(disc, 0.75, c, a);
      const auto v = verify_perturbation(pd, 0.5, 16);
      CHECK(v.convex);
      CHECK(v.contains_base);
      CHECK(v.cpc_violated_at_tp);
      CHECK(v.cpc_violation >= 0.5 * a * std::pow(0.5 * c, 4) * (1 - 1e-9));
      CHECK(v.cec_feasible);
      CHECK(v.cec_min_margin > 0.0);
      CHECK(v.distances.sup[0] <= a * std::pow(c, 4));
      norms.push_back(v.distances);
    }
    for (std::size_t i = 1; i < norms.size(); ++i) {
      for (int k = 0; k < 4; ++k) CHECK(norms[i].sup[k] < norms[i - 1].sup[k]);
      CHECK(norms[i].holder < norms[i - 1].holder);
      const double ratio = norms[i].sup[3] / norms[i - 1].sup[3];
      CHECK(ratio >= 0.35);
      CHECK(ratio <= 0.65);
      // the Hoelder-1/2 seminorm of d''' scales like c^(1/2)
      CHECK(norms[i].holder / norms[i - 1].holder == doctest::Approx(std::sqrt(0.5)).epsilon(0.15));
    }
  }

  TEST_CASE("huge amplitude breaks convexity") {
    CHECK_THROWS_WITH_AS(perturb_domain(ellipse(1, 1), 0.75, 0.2, 100.0), doctest::Contains("not convex"), GeometryError);
    CHECK_THROWS_AS(perturb_domain(ellipse(1, 1), 0.75, 0.2, -1.0), GeometryError);
  }

  TEST_CASE("admissible scale") {
    const auto s = admissible_scale(ellipse(1, 1), 0.75);
    CHECK(s.c0 == doctest::Approx(0.4));
    CHECK(s.halvings == 0);
    const auto e = admissible_scale(ellipse(2, 1), 0.0);
    CHECK(e.c0 > 0.0);
    CHECK(e.c0 <= 0.4);
  }
}

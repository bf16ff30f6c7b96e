#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "concave2d/geometry.hpp"

using namespace concave2d;

namespace {

constexpr double pi = std::numbers::pi;

BoundaryCurve ellipse(double p, double q, Similarity tr = {}) { return curve_from_spec({EllipseSpec{p, q}, tr}); }

BoundaryCurve fourier(double r0, std::vector<double> cs, std::vector<double> sn = {}, Similarity tr = {}) {
  return curve_from_spec({PolarFourierSpec{r0, std::move(cs), std::move(sn)}, tr});
}

BoundaryCurve sampled_ellipse(double p, double q, int n) {
  SampledSpec s;
  for (int i = 0; i < n; ++i) s.points.emplace_back(p * std::cos(2 * pi * i / n), q * std::sin(2 * pi * i / n));
  return curve_from_spec({s, {}});
}

// Closed-form curvature of (p cos th, q sin th) and its arclength derivative.
double ellipse_K(double p, double q, double th) {
  return p * q / std::pow(p * p * std::sin(th) * std::sin(th) + q * q * std::cos(th) * std::cos(th), 1.5);
}
double ellipse_dK_ds(double p, double q, double th) {
  const double g = p * p * std::sin(th) * std::sin(th) + q * q * std::cos(th) * std::cos(th);
  const double dg = 2 * (p * p - q * q) * std::sin(th) * std::cos(th);
  return -1.5 * p * q * dg / std::pow(g, 2.5) / std::sqrt(g);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("spec validation") {
    CHECK_THROWS_AS(ellipse(0.0, 1.0), GeometryError);
    CHECK_THROWS_AS(ellipse(1.0, -1.0), GeometryError);
    CHECK_THROWS_AS(fourier(0.0, {}), GeometryError);
    CHECK_THROWS_AS(fourier(1.0, {2.0}), GeometryError);  // radius turns negative
    CHECK_THROWS_AS(ellipse(1, 1, Similarity{0.0, 0.0, Vec2::Zero()}), GeometryError);
    SampledSpec few;
    for (int i = 0; i < 100; ++i) few.points.emplace_back(std::cos(i * 0.0628), std::sin(i * 0.0628));
    CHECK_THROWS_AS(curve_from_spec({few, {}}), GeometryError);
  }

  TEST_CASE("curve positions") {
    const auto c = ellipse(1, 1);
    CHECK(c.position(0.0).x() == doctest::Approx(1.0));
    CHECK(c.position(0.0).y() == doctest::Approx(0.0));
    const auto f = fourier(1.0, {0.0, 0.0, 0.05});
    for (double t : {0.0, 0.1, 0.37, 0.8}) {
      const double th = 2 * pi * t, r = 1 + 0.05 * std::cos(3 * th);
      CHECK((f.position(t) - Vec2(r * std::cos(th), r * std::sin(th))).norm() < 1e-14);
    }
  }

  TEST_CASE("jets against closed-form ellipse curvature") {
    const auto c = ellipse(1, 1);
    for (double t : {0.0, 0.3, 0.77}) {
      const auto j = local_jet(c, t);
      CHECK(j.curvature == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(j.curvature_ds) < 1e-13);
    }
    const auto e = ellipse(2, 1);
    CHECK(local_jet(e, 0.0).curvature == doctest::Approx(2.0));
    CHECK(local_jet(e, 0.25).curvature == doctest::Approx(0.25));
    CHECK(std::abs(local_jet(e, 0.0).curvature_ds) < 1e-13);
    for (double t : {0.05, 0.13, 0.4, 0.9}) {
      const double th = 2 * pi * t;
      const auto j = local_jet(e, t);
      CHECK(j.curvature == doctest::Approx(ellipse_K(2, 1, th)).epsilon(1e-12));
      CHECK(j.curvature_ds == doctest::Approx(ellipse_dK_ds(2, 1, th)).epsilon(1e-10));
    }
  }

  TEST_CASE("polar curvature formula") {
    const auto f = fourier(1.0, {0.0, 0.1}, {0.0, 0.0, 0.02});
    for (double t : {0.1, 0.45, 0.7}) {
      const double th = 2 * pi * t;
      const double r = 1 + 0.1 * std::cos(2 * th) + 0.02 * std::sin(3 * th);
      const double r1 = -0.2 * std::sin(2 * th) + 0.06 * std::cos(3 * th);
      const double r2 = -0.4 * std::cos(2 * th) - 0.18 * std::sin(3 * th);
      const double K = (r * r + 2 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
      CHECK(local_jet(f, t).curvature == doctest::Approx(K).epsilon(1e-12));
    }
  }

  TEST_CASE("preferred frame") {
    const auto c = ellipse(1, 1);
    const auto fb = preferred_frame(c, 0.75);
    CHECK((fb.rotation - Mat2::Identity()).norm() < 1e-14);
    CHECK((fb.origin - Vec2(0, -1)).norm() < 1e-14);
    const auto fr = preferred_frame(c, 0.0);
    CHECK(fr.to_local(Vec2(0, 0)).y() > 0.0);  // the center lies above the tangent line
    CHECK(std::abs(std::abs(fr.vector_to_local(Vec2(0, 1)).x()) - 1.0) < 1e-14);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    const auto f = fourier(1.0, {0.05, 0.0, 0.03}, {0.02});
    for (int i = 0; i < 50; ++i) {
      const double t = u(rng);
      const auto jet = local_jet(f, t);
      const auto fr2 = preferred_frame(jet);
      CHECK(fr2.to_local(jet.point).norm() < 1e-14);
      CHECK((fr2.vector_to_local(jet.inward_normal) - Vec2(0, 1)).norm() < 1e-14);
      CHECK((fr2.vector_to_local(jet.tangent) - Vec2(1, 0)).norm() < 1e-14);
      CHECK(fr2.rotation.determinant() == doctest::Approx(1.0));
    }
  }

  TEST_CASE("local graph") {
    const auto c = ellipse(1, 1);
    const auto g = local_graph(c, 0.75, 0.5);
    CHECK(g(0.3) == doctest::Approx(1 - std::sqrt(1 - 0.09)).epsilon(1e-13));
    CHECK(g(0.3) == doctest::Approx(0.04606).epsilon(1e-4));
    const auto d = g.derivatives(0.0);
    CHECK(std::abs(d[0]) < 1e-15);
    CHECK(std::abs(d[1]) < 1e-14);
    CHECK(d[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d[3]) < 1e-10);
    // rho = 1 - sqrt(1 - x^2): rho'' = (1 - x^2)^{-3/2}
    CHECK(g.derivatives(0.4)[2] == doctest::Approx(std::pow(1 - 0.16, -1.5)).epsilon(1e-12));

    const auto e = ellipse(2, 1);
    CHECK(local_graph(e, 0.75, 0.5).derivatives(0.0)[2] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(local_graph(c, 0.75, 0.999), GeometryError);  // slope exceeds 10
  }

  TEST_CASE("graph derivatives match the jet (property)") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0, 1), amp(-0.04, 0.04);
    for (int trial = 0; trial < 40; ++trial) {
      const auto f = fourier(1.0, {amp(rng), amp(rng), amp(rng)}, {amp(rng), amp(rng)});
      const double t = u(rng);
      const auto jet = local_jet(f, t);
      const auto d = local_graph(f, t, 0.1).derivatives(0.0);
      CHECK(std::abs(d[2] - jet.curvature) < 1e-8);
      CHECK(std::abs(d[3] - jet.curvature_ds) < 1e-8);
    }
  }

  TEST_CASE("convexity, area, perimeter") {
    CHECK(convexity_check(ellipse(1, 1)) == doctest::Approx(1.0));
    CHECK(convexity_check(ellipse(2, 1)) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(convexity_check(fourier(1.0, {0.0, 0.0, 0.3})) < 0.0);
    CHECK(enclosed_area(ellipse(1, 1)) == doctest::Approx(pi).epsilon(1e-6));
    CHECK(enclosed_area(ellipse(2, 1)) == doctest::Approx(2 * pi).epsilon(1e-6));
    CHECK(enclosed_area(ellipse(3, 1)) == doctest::Approx(3 * pi).epsilon(1e-6));
    CHECK(perimeter(ellipse(1, 1)) == doctest::Approx(2 * pi).epsilon(1e-9));
    CHECK(polygon_area({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}) == doctest::Approx(1.0));
  }

  TEST_CASE("total curvature is 2 pi (property)") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> amp(-0.03, 0.03), sc(0.3, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
      const auto f = fourier(1.0, {amp(rng), amp(rng), amp(rng), amp(rng)}, {amp(rng), amp(rng)},
                             Similarity{sc(rng), amp(rng) * 50, Vec2(amp(rng), amp(rng))});
      REQUIRE(convexity_check(f) > 0.0);
      CHECK(total_curvature(f) == doctest::Approx(2 * pi).epsilon(1e-6));
    }
    CHECK(total_curvature(sampled_ellipse(2, 1, 1024)) == doctest::Approx(2 * pi).epsilon(1e-6));
  }

  TEST_CASE("rigid motions and dilations (property)") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0, 1), ang(-pi, pi), shift(-5, 5), lam(0.2, 5);
    const std::vector<double> cs{0.03, -0.02, 0.01}, sn{0.0, 0.015};
    const auto base = fourier(1.0, cs, sn);
    const double area = enclosed_area(base);
    for (int trial = 0; trial < 50; ++trial) {
      const double t = u(rng), l = lam(rng);
      const auto moved = fourier(1.0, cs, sn, Similarity{1.0, ang(rng), Vec2(shift(rng), shift(rng))});
      const auto a = local_jet(base, t), b = local_jet(moved, t);
      CHECK(std::abs(a.curvature - b.curvature) < 1e-10);
      CHECK(std::abs(a.curvature_ds - b.curvature_ds) < 1e-10);
      CHECK(std::abs(enclosed_area(moved) - area) < 1e-10);
      const auto scaled = fourier(1.0, cs, sn, Similarity{l, 0.0, Vec2::Zero()});
      const auto s = local_jet(scaled, t);
      CHECK(s.curvature == doctest::Approx(a.curvature / l).epsilon(1e-12));
      CHECK(s.curvature_ds * l * l == doctest::Approx(a.curvature_ds).epsilon(1e-10));
      CHECK(enclosed_area(scaled) == doctest::Approx(l * l * area).epsilon(1e-12));
    }
  }

  TEST_CASE("sampled splines follow the dilation law and the analytic jet") {
    const auto s1 = sampled_ellipse(2, 1, 1024);
    SampledSpec big;
    for (int i = 0; i < 1024; ++i) big.points.emplace_back(6 * std::cos(2 * pi * i / 1024), 3 * std::sin(2 * pi * i / 1024));
    const auto s3 = curve_from_spec({big, {}});
    for (double t : {0.0, 0.1, 0.3}) {
      const auto a = local_jet(s1, t), b = local_jet(s3, t);
      CHECK(b.curvature * 3 == doctest::Approx(a.curvature).epsilon(1e-8));
      CHECK(std::abs(b.curvature_ds * 9 - a.curvature_ds) < 1e-7);
      CHECK(a.curvature == doctest::Approx(ellipse_K(2, 1, 2 * pi * t)).epsilon(1e-8));
    }
  }

  TEST_CASE("arclength parametrization") {
    const auto e = ellipse(2, 1);
    const ArclengthTable table(e);
    CHECK(table.length() == doctest::Approx(perimeter(e)).epsilon(1e-10));
    for (double s : {0.1, 2.0, 7.5}) CHECK(table.arclength_at(table.parameter_at(s)) == doctest::Approx(s).epsilon(1e-10));
    const auto ts = equispaced_parameters(e, 16);
    REQUIRE(ts.size() == 16);
    CHECK(ts[0] == 0.0);
    for (int i = 1; i < 16; ++i)
      CHECK(table.arclength_at(ts[i]) - table.arclength_at(ts[i - 1]) == doctest::Approx(table.length() / 16).epsilon(1e-9));
  }

  TEST_CASE("convex regions give exact chords") {
    const CurveRegion disc(ellipse(1, 1));
    const auto ch = disc.chord_at_y(0.6);
    REQUIRE(ch);
    CHECK(ch->lo == doctest::Approx(-0.8).epsilon(1e-13));
    CHECK(ch->hi == doctest::Approx(0.8).epsilon(1e-13));
    CHECK_FALSE(disc.chord_at_y(1.2));
    const CurveRegion el(ellipse(2, 1, Similarity{1.0, pi / 2, Vec2(1, 0)}));
    const auto cx = el.chord_at_x(1.0);
    REQUIRE(cx);
    CHECK(cx->lo == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(cx->hi == doctest::Approx(2.0).epsilon(1e-12));

    const PolygonRegion tri({Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2)});
    const auto tc = tri.chord_at_y(std::sqrt(3.0) / 4);
    REQUIRE(tc);
    CHECK(tc->lo == doctest::Approx(0.25));
    CHECK(tc->hi == doctest::Approx(0.75));
    CHECK(tri.inner_distance(Vec2(0.5, 0.1)) == doctest::Approx(0.1));
    CHECK_THROWS_AS(PolygonRegion({Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)}), GeometryError);
  }
}

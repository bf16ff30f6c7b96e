#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "concave2d/series.hpp"
#include "concave2d/spline.hpp"

using namespace concave2d;

TEST_SUITE("series") {
  TEST_CASE("derivatives of exp(sin x) at a point") {
    const double x = 0.7;
    using S = Series<4>;
    S s = S::variable(x) - x;  // t - x
    // Taylor coefficients of sin about x
    S sinx = S::constant(std::sin(x)) + std::cos(x) * s - 0.5 * std::sin(x) * s * s -
             std::cos(x) / 6.0 * s * s * s + std::sin(x) / 24.0 * s * s * s * s;
    const auto e = exp(sinx).derivatives();
    const double sn = std::sin(x), cs = std::cos(x), f = std::exp(sn);
    CHECK(e[0] == doctest::Approx(f).epsilon(1e-15));
    CHECK(e[1] == doctest::Approx(cs * f).epsilon(1e-13));
    CHECK(e[2] == doctest::Approx((cs * cs - sn) * f).epsilon(1e-13));
    CHECK(e[3] == doctest::Approx((cs * cs * cs - 3 * sn * cs - cs) * f).epsilon(1e-13));
  }

  TEST_CASE("reciprocal and division match closed forms") {
    using S = Series<4>;
    const double x = 0.3;
    const auto d = reciprocal(1.0 + S::variable(x)).derivatives();
    const double y = 1.0 + x;
    CHECK(d[0] == doctest::Approx(1 / y));
    CHECK(d[1] == doctest::Approx(-1 / (y * y)));
    CHECK(d[2] == doctest::Approx(2 / (y * y * y)));
    CHECK(d[3] == doctest::Approx(-6 / std::pow(y, 4)));
    CHECK(d[4] == doctest::Approx(24 / std::pow(y, 5)));
    const auto q = (S::variable(x) / (1.0 + S::variable(x))).derivatives();
    CHECK(q[1] == doctest::Approx(1 / (y * y)));
  }

  TEST_CASE("from_derivatives inverts derivatives") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
      std::array<double, 5> d{};
      for (auto& v : d) v = u(rng);
      const auto back = Series<4>::from_derivatives(d).derivatives();
      for (int k = 0; k < 5; ++k) CHECK(back[k] == doctest::Approx(d[k]).epsilon(1e-14));
    }
  }
}

TEST_SUITE("spline") {
  TEST_CASE("interpolates its knots") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(37);
    for (auto& x : v) x = u(rng);
    const PeriodicQuinticSpline s(v);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(s(static_cast<double>(i)) == doctest::Approx(v[i]).epsilon(1e-13));
    CHECK(s(37.0) == doctest::Approx(v[0]).epsilon(1e-13));
    CHECK(s(-1.0) == doctest::Approx(v[36]).epsilon(1e-13));
  }

  TEST_CASE("reproduces a smooth periodic function and its derivatives") {
    const int n = 256;
    const double w = 2 * M_PI / n;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(w * i) + 0.3 * std::cos(3 * w * i);
    const PeriodicQuinticSpline s(v);
    for (double u : {0.25, 17.5, 100.9, 255.3}) {
      const auto d = s.derivatives(u);
      const double t = w * u;
      CHECK(d[0] == doctest::Approx(std::sin(t) + 0.3 * std::cos(3 * t)).epsilon(1e-9));
      CHECK(d[1] / w == doctest::Approx(std::cos(t) - 0.9 * std::sin(3 * t)).epsilon(1e-7));
      CHECK(d[2] / (w * w) == doctest::Approx(-std::sin(t) - 2.7 * std::cos(3 * t)).epsilon(1e-5));
    }
  }

  TEST_CASE("fourth derivative is continuous across knots") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(20);
    for (auto& x : v) x = u(rng);
    const PeriodicQuinticSpline s(v);
    for (int i = 0; i < 20; ++i) {
      const auto l = s.derivatives(i - 1e-9), r = s.derivatives(i + 1e-9);
      for (int k = 0; k <= 4; ++k) CHECK(std::abs(l[k] - r[k]) < 1e-5 * (1 + std::abs(l[k])));
    }
  }
}

#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracles.hpp"

#include "concave2d/pde.hpp"

using namespace concave2d;

namespace {

BoundaryCurve ellipse(double p, double q, double scale = 1.0) {
  return curve_from_spec({EllipseSpec{p, q}, Similarity{scale, 0.0, Vec2::Zero()}});
}

SolveConfig grid(double h, double tol_fix = 1e-10) {
  SolveConfig c;
  c.h = h;
  c.tol_fix = tol_fix;
  return c;
}

template <typename Exact>
double max_error(const GridSolution& sol, Exact&& exact) {
  double err = 0.0;
  for (int node : sol.node_of)
    err = std::max(err, std::abs(sol.values[node] - exact(sol.x(node % sol.nx), sol.y(node / sol.nx))));
  return err;
}

}  // namespace

TEST_SUITE("pde") {
  TEST_CASE("power nonlinearity") {
    const auto t = nonlinearity_power(0, 1);
    CHECK(t.is_torsion());
    CHECK(t.f(3.0) == 1.0);
    const auto a = nonlinearity_power(0.1, 1);
    CHECK(a.f(0.25) == doctest::Approx(0.975));
    CHECK(a.df(0.25) == doctest::Approx(-0.1));
    CHECK(a.d2f(0.25) == 0.0);
    const auto b = nonlinearity_power(0.1, 2);
    CHECK(b.f(0.5) == doctest::Approx(0.975));
    CHECK(b.df(0.5) == doctest::Approx(-0.1));
    CHECK(b.d2f(0.5) == doctest::Approx(-0.2));
    CHECK_THROWS(nonlinearity_power(-1, 1));
    CHECK_THROWS(nonlinearity_power(1, 0));
  }

  TEST_CASE("condition on f") {
    CHECK(check_condition2(torsion(), 10.0).pass);
    CHECK(check_condition2(nonlinearity_power(0.1, 1), 0.25).pass);
    const auto bad = check_condition2(nonlinearity_power(5, 1), 0.25);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0] == "f > 0");
  }

  TEST_CASE("exact ellipse torsion record") {
    const auto d = exact_ellipse_torsion(1, 1);
    CHECK(d.c == doctest::Approx(0.25));
    CHECK(d.hessian()(0, 0) == doctest::Approx(-0.5));
    const auto e = exact_ellipse_torsion(0.5, 1);
    CHECK(e.c == doctest::Approx(0.4));
    CHECK(e.hessian()(0, 0) == doctest::Approx(-0.2));
    CHECK(e.hessian()(1, 1) == doctest::Approx(-0.8));
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.2, 3);
    for (int i = 0; i < 100; ++i) {
      const auto r = exact_ellipse_torsion(u(rng), u(rng));
      CHECK(r.hessian().trace() == doctest::Approx(-1.0).epsilon(1e-14));
      CHECK(r.value(Vec2(1 / r.a, 0)) == doctest::Approx(0.0));
    }
  }

  TEST_CASE("disc torsion") {
    const auto sol = solve_dirichlet(ellipse(1, 1), torsion(), grid(1.0 / 64));
    CHECK(sol.at(-sol.i0, -sol.j0) == doctest::Approx(0.25).epsilon(2e-3));
    CHECK(sol.positive);
    CHECK(sol.residual < 1e-9);
    CHECK(max_error(sol, [](double x, double y) { return 0.25 * (1 - x * x - y * y); }) < 1e-12);
  }

  TEST_CASE("ellipse torsion is reproduced to roundoff") {
    const auto sol = solve_dirichlet(ellipse(2, 1), torsion(), grid(1.0 / 64));
    CHECK(std::abs(sol.at(-sol.i0, -sol.j0) - 0.4) < 1e-3);
    CHECK(max_error(sol, [](double x, double y) { return oracle::ellipse_torsion(x, y, 2, 1); }) < 1e-12);
  }

  TEST_CASE("second-order convergence on the disc with f = 1 - c u") {
    for (double c : {0.1, 2.0}) {
      std::vector<double> errs;
      for (int n : {16, 32, 64}) {
        const auto sol = solve_dirichlet(ellipse(1, 1), nonlinearity_power(c, 1), grid(1.0 / n, 1e-14));
        errs.push_back(max_error(sol, [c](double x, double y) { return oracle::disc_linear(std::hypot(x, y), c); }));
        CHECK(sol.iterations <= 100);
      }
      CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.1));
      CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.1));
    }
  }

  TEST_CASE("semilinear disc lies below the torsion solution") {
    const auto t = solve_dirichlet(ellipse(1, 1), torsion(), grid(1.0 / 32));
    const auto s = solve_dirichlet(ellipse(1, 1), nonlinearity_power(0.1, 1), grid(1.0 / 32));
    CHECK(s.positive);
    CHECK(s.max_u < 0.25);
    for (int node : s.node_of) CHECK(s.values[node] <= t.values[node]);
    CHECK(s.max_u == doctest::Approx(oracle::disc_linear(0, 0.1)).epsilon(1e-5));
  }

  TEST_CASE("enlarging the domain increases u") {
    const auto small = solve_dirichlet(ellipse(1, 1), torsion(), grid(1.0 / 32));
    const auto big = solve_dirichlet(ellipse(1, 1, 1.1), torsion(), grid(1.0 / 32));
    int compared = 0;
    for (int node : small.node_of) {
      const int i = node % small.nx + small.i0, j = node / small.nx + small.j0;
      const int bi = i - big.i0, bj = j - big.j0;
      REQUIRE(big.interior(bi, bj));
      CHECK(big.at(bi, bj) > small.values[node]);
      ++compared;
    }
    CHECK(compared == static_cast<int>(small.unknowns()));
  }

  TEST_CASE("equilateral triangle torsion converges to the cubic") {
    const auto tri = std::make_shared<PolygonRegion>(
        std::vector<Vec2>{Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2)});
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
      const auto sol = solve_dirichlet(tri, torsion(), grid(1.0 / n));
      errs.push_back(max_error(sol, oracle::triangle_torsion));
      CHECK(sol.positive);
    }
    CHECK(errs[2] < 1e-7);
    CHECK(errs[0] / errs[1] > 3.3);
    CHECK(errs[1] / errs[2] > 3.3);
    CHECK(oracle::triangle_torsion(0.5, std::sqrt(3.0) / 6) == doctest::Approx(1.0 / 36));
  }

  TEST_CASE("interpolation reproduces cubics") {
    const auto sol = solve_dirichlet(ellipse(1, 1), torsion(), grid(1.0 / 32));
    // the discrete solution equals the quadratic exactly, so interpolation must too
    for (const Vec2& p : {Vec2(0.1, 0.23), Vec2(-0.4, 0.31), Vec2(0.0, -0.7)}) {
      const auto v = interpolate(sol, p);
      REQUIRE(v);
      CHECK(v->u == doctest::Approx(0.25 * (1 - p.squaredNorm())).epsilon(1e-11));
      CHECK(v->grad.x() == doctest::Approx(-0.5 * p.x()).epsilon(1e-9));
      CHECK(v->hess(0, 0) == doctest::Approx(-0.5).epsilon(1e-8));
      CHECK(std::abs(v->hess(0, 1)) < 1e-8);
    }
    CHECK_FALSE(interpolate(sol, Vec2(0.99, 0.0)));
  }

  TEST_CASE("normal derivatives") {
    const auto disc = ellipse(1, 1);
    const auto sol = solve_dirichlet(disc, torsion(), grid(1.0 / 64));
    for (double t : {0.0, 0.13, 0.5, 0.77}) CHECK(normal_derivative(sol, disc, t) == doctest::Approx(0.5).epsilon(0.02));
    const auto el = ellipse(2, 1);
    const auto se = solve_dirichlet(el, torsion(), grid(1.0 / 64));
    CHECK(normal_derivative(se, el, 0.75) == doctest::Approx(0.8).epsilon(0.025));
    CHECK(normal_derivative(se, el, 0.0) == doctest::Approx(0.4).epsilon(0.05));
  }

  TEST_CASE("grid too coarse") {
    CHECK_THROWS_AS(solve_dirichlet(ellipse(1, 1), torsion(), grid(1.5)), SolverError);
  }

  TEST_CASE("nonconvergent Picard is reported") {
    SolveConfig cfg = grid(1.0 / 16);
    cfg.max_iter = 2;
    CHECK_THROWS_AS(solve_dirichlet(ellipse(1, 1), nonlinearity_power(2.0, 1), cfg), SolverError);
  }
}

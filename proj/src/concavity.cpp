#include "concave2d/concavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "concave2d/parallel.hpp"

namespace concave2d {

Eigen2 symmetric_eigen(double uxx, double uxy, double uyy) {
  const double mean = 0.5 * (uxx + uyy);
  const double r = std::hypot(0.5 * (uxx - uyy), uxy);
  Eigen2 e;
  e.lmin = mean - r;
  e.lmax = mean + r;
  const double theta = r > 0.0 ? 0.5 * std::atan2(2.0 * uxy, uxx - uyy) : 0.0;
  e.e_max = {std::cos(theta), std::sin(theta)};
  return e;
}

HessianField hessian_field(const GridSolution& sol, int margin_cells) {
  if (margin_cells < 2) throw ConcavityError("hessian field: margin_cells must be at least 2");
  HessianField field;
  field.h = sol.h;
  field.margin_cells = margin_cells;
  const int r = 1 + margin_cells;
  const double h2 = sol.h * sol.h;
  for (int j = 0; j < sol.ny; ++j)
    for (int i = 0; i < sol.nx; ++i) {
      bool ok = sol.interior(i, j);
      for (int dj = -r; ok && dj <= r; ++dj)
        for (int di = -r; ok && di <= r; ++di) ok = sol.interior(i + di, j + dj);
      if (!ok) continue;
      HessianNode n;
      n.i = i;
      n.j = j;
      n.point = {sol.x(i), sol.y(j)};
      n.u = sol.at(i, j);
      n.uxx = (sol.at(i + 1, j) - 2.0 * n.u + sol.at(i - 1, j)) / h2;
      n.uyy = (sol.at(i, j + 1) - 2.0 * n.u + sol.at(i, j - 1)) / h2;
      n.uxy = (sol.at(i + 1, j + 1) - sol.at(i - 1, j + 1) - sol.at(i + 1, j - 1) + sol.at(i - 1, j - 1)) / (4.0 * h2);
      n.eig = symmetric_eigen(n.uxx, n.uxy, n.uyy);
      field.nodes.push_back(n);
    }
  if (field.nodes.empty()) throw ConcavityError("hessian field: no evaluable nodes (domain too thin for the grid)");
  return field;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::StronglyConcave: return "strongly-concave";
    case Verdict::Concave: return "concave";
    case Verdict::Nonconcave: return "nonconcave";
  }
  return "?";
}

ConcavityVerdict concavity_verdict(const HessianField& field, double tol) {
  ConcavityVerdict v;
  v.max_lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < field.nodes.size(); ++k)
    if (field.nodes[k].eig.lmax > v.max_lmax) {
      v.max_lmax = field.nodes[k].eig.lmax;
      v.witness = k;
    }
  const auto& w = field.nodes[v.witness];
  v.point = w.point;
  v.direction = w.eig.e_max;
  if (v.max_lmax > tol)
    v.verdict = Verdict::Nonconcave;
  else if (v.max_lmax < -tol)
    v.verdict = Verdict::StronglyConcave;
  else
    v.verdict = Verdict::Concave;
  return v;
}

double claim_bound(const LocalJet& jet) {
  const double K = jet.curvature, d = jet.curvature_ds;
  return 9.0 * K * K * K / (9.0 * K * K * K * K + d * d);
}

bool ClaimReport::all_pass() const {
  return std::all_of(points.begin(), points.end(), [](const ClaimPoint& p) { return p.pass; });
}

ClaimReport claim_check(const GridSolution& sol, const BoundaryCurve& curve, int n_points, double slack) {
  const auto params = equispaced_parameters(curve, n_points);
  ClaimReport rep;
  rep.points.resize(params.size());
  parallel_for(params.size(), [&](std::size_t k) {
    ClaimPoint& p = rep.points[k];
    p.t = params[k];
    p.normal_derivative = normal_derivative(sol, curve, p.t);
    p.bound = claim_bound(local_jet(curve, p.t));
    p.pass = p.normal_derivative > 0.0 && p.normal_derivative <= p.bound + slack;
  });
  return rep;
}

SqrtConcavityReport sqrt_concavity_check(const GridSolution& sol, double tol, double floor_fraction) {
  SqrtConcavityReport rep;
  rep.max_lmax = -std::numeric_limits<double>::infinity();
  const double h = sol.h, h2 = h * h;
  const double floor_u = floor_fraction * sol.max_u;
  for (int j = 0; j < sol.ny; ++j)
    for (int i = 0; i < sol.nx; ++i) {
      const double u = sol.at(i, j);
      if (!sol.interior(i, j) || u < floor_u || !(u > 0.0)) continue;
      bool ok = true;
      for (int dj = -1; ok && dj <= 1; ++dj)
        for (int di = -1; ok && di <= 1; ++di) ok = sol.interior(i + di, j + dj);
      if (!ok) continue;
      const Vec2 g{(sol.at(i + 1, j) - sol.at(i - 1, j)) / (2.0 * h), (sol.at(i, j + 1) - sol.at(i, j - 1)) / (2.0 * h)};
      const double uxx = (sol.at(i + 1, j) - 2.0 * u + sol.at(i - 1, j)) / h2;
      const double uyy = (sol.at(i, j + 1) - 2.0 * u + sol.at(i, j - 1)) / h2;
      const double uxy =
          (sol.at(i + 1, j + 1) - sol.at(i - 1, j + 1) - sol.at(i + 1, j - 1) + sol.at(i - 1, j - 1)) / (4.0 * h2);
      const double s = std::sqrt(u);
      const double a = 0.5 / s, b = 0.25 / (u * s);
      const Eigen2 e = symmetric_eigen(a * uxx - b * g.x() * g.x(), a * uxy - b * g.x() * g.y(), a * uyy - b * g.y() * g.y());
      ++rep.nodes;
      if (e.lmax > rep.max_lmax) {
        rep.max_lmax = e.lmax;
        rep.point = {sol.x(i), sol.y(j)};
      }
    }
  rep.concave = rep.nodes > 0 && rep.max_lmax <= tol;
  return rep;
}

BoundaryLimit boundary_limit(const GridSolution& sol, const BoundaryCurve& curve, double t) {
  const LocalJet jet = local_jet(curve, t);
  const double d = normal_offset(sol, jet.point, jet.inward_normal);
  const LocalValue v1 = *interpolate(sol, jet.point + d * jet.inward_normal);
  const LocalValue v2 = *interpolate(sol, jet.point + 2.0 * d * jet.inward_normal);
  BoundaryLimit b;
  b.t = t;
  b.point = jet.point;
  b.grad = 2.0 * v1.grad - v2.grad;
  b.hess = 2.0 * v1.hess - v2.hess;
  b.lmax = symmetric_eigen(b.hess(0, 0), b.hess(0, 1), b.hess(1, 1)).lmax;
  return b;
}

BoundaryIdentities boundary_identities(const GridSolution& sol, const BoundaryCurve& curve, int n_points) {
  const auto params = equispaced_parameters(curve, n_points);
  std::vector<std::array<double, 2>> vals(params.size());
  parallel_for(params.size(), [&](std::size_t k) {
    const LocalJet jet = local_jet(curve, params[k]);
    const BoundaryLimit b = boundary_limit(sol, curve, params[k]);
    const double u_nu = normal_derivative(sol, curve, params[k]);
    vals[k] = {std::abs(b.grad.dot(jet.tangent)),
               std::abs(jet.tangent.dot(b.hess * jet.tangent) + u_nu * jet.curvature)};
  });
  BoundaryIdentities r;
  for (const auto& v : vals) {
    r.max_tangential = std::max(r.max_tangential, v[0]);
    r.max_second = std::max(r.max_second, v[1]);
  }
  return r;
}

std::string to_string(Theorem2Status s) {
  switch (s) {
    case Theorem2Status::HypothesisFails: return "hypothesis-fails";
    case Theorem2Status::HypothesisMarginal: return "hypothesis-marginal";
    case Theorem2Status::Consistent: return "consistent";
    case Theorem2Status::Violation: return "VIOLATION";
  }
  return "?";
}

Theorem2Report theorem2_consistency(const GridSolution& sol, const BoundaryCurve& curve, double tol_b, double tol_i,
                                    int n_points) {
  Theorem2Report rep;
  const auto cond = check_condition2(sol.f, sol.max_u);
  for (const auto& v : cond.violations)
    if (v == "f > 0" || v == "f'' <= 0") rep.f_hypothesis = false;

  const auto params = equispaced_parameters(curve, n_points);
  std::vector<double> lmax(params.size());
  parallel_for(params.size(), [&](std::size_t k) { lmax[k] = boundary_limit(sol, curve, params[k]).lmax; });
  rep.boundary_max = *std::max_element(lmax.begin(), lmax.end());
  rep.interior_max = concavity_verdict(hessian_field(sol), tol_i).max_lmax;

  if (!rep.f_hypothesis || rep.boundary_max > tol_b)
    rep.status = Theorem2Status::HypothesisFails;
  else if (rep.interior_max <= tol_i)
    rep.status = Theorem2Status::Consistent;
  else if (rep.boundary_max >= -tol_b)
    rep.status = Theorem2Status::HypothesisMarginal;
  else
    rep.status = Theorem2Status::Violation;
  return rep;
}

ConcavityReport analyze_solution(const GridSolution& sol, const BoundaryCurve& curve, const AnalyzeOptions& options) {
  ConcavityReport rep;
  rep.tol = options.tol.value_or(5.0 * sol.h);
  rep.tol_b = options.tol_b.value_or(10.0 * sol.h);
  rep.field = hessian_field(sol, options.margin_cells);
  rep.verdict = concavity_verdict(rep.field, rep.tol);
  rep.strongly_concave = rep.verdict.verdict == Verdict::StronglyConcave;
  if (sol.f.is_torsion()) rep.sqrt_check = sqrt_concavity_check(sol, rep.tol);
  rep.claim = claim_check(sol, curve, options.boundary_points, options.claim_slack);
  rep.theorem2 = theorem2_consistency(sol, curve, rep.tol_b, rep.tol);
  return rep;
}

}  // namespace concave2d

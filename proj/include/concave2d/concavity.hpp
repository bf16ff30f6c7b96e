#pragma once

#include <optional>
#include <string>
#include <vector>

#include "concave2d/geometry.hpp"
#include "concave2d/pde.hpp"

namespace concave2d {

struct Eigen2 {
  double lmin = 0.0, lmax = 0.0;
  Vec2 e_max = Vec2::UnitX();  // unit eigenvector of lmax
};

/// Closed-form spectral decomposition of a symmetric 2x2 matrix.
Eigen2 symmetric_eigen(double uxx, double uxy, double uyy);

struct HessianNode {
  int i = 0, j = 0;
  Vec2 point = Vec2::Zero();
  double u = 0.0;
  double uxx = 0.0, uyy = 0.0, uxy = 0.0;
  Eigen2 eig;
};

struct HessianField {
  double h = 0.0;
  int margin_cells = 2;
  std::vector<HessianNode> nodes;  // evaluable nodes in lattice order
};

class ConcavityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Central second differences at nodes whose whole block of radius
/// 1 + margin_cells is interior.
HessianField hessian_field(const GridSolution& sol, int margin_cells = 2);

enum class Verdict { StronglyConcave, Concave, Nonconcave };
std::string to_string(Verdict v);

struct ConcavityVerdict {
  Verdict verdict = Verdict::Concave;
  double max_lmax = 0.0;
  std::size_t witness = 0;  // index into HessianField::nodes
  Vec2 point = Vec2::Zero();
  Vec2 direction = Vec2::UnitX();
};

/// Nonconcave iff max lambda_max > tol; strongly concave iff max lambda_max < -tol.
ConcavityVerdict concavity_verdict(const HessianField& field, double tol);

/// 9K^3 / (9K^4 + (dK/ds)^2)
double claim_bound(const LocalJet& jet);

struct ClaimPoint {
  double t = 0.0;
  double normal_derivative = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ClaimReport {
  std::vector<ClaimPoint> points;
  bool all_pass() const;
};

/// 0 < u_nu <= claim_bound + slack at n_points boundary points equispaced in arclength.
ClaimReport claim_check(const GridSolution& sol, const BoundaryCurve& curve, int n_points, double slack);

struct SqrtConcavityReport {
  bool concave = false;
  double max_lmax = 0.0;
  Vec2 point = Vec2::Zero();
  std::size_t nodes = 0;
};

/// Hessian of sqrt(u) = D^2u / (2 sqrt u) - grad u grad u^T / (4 u^{3/2}) on nodes
/// with u >= floor_fraction * max u and an interior 3x3 stencil.
SqrtConcavityReport sqrt_concavity_check(const GridSolution& sol, double tol, double floor_fraction = 0.05);

/// Gradient and Hessian at a boundary point, extrapolated linearly from the
/// interpolants at offsets delta and 2 delta along the inward normal.
struct BoundaryLimit {
  double t = 0.0;
  Vec2 point = Vec2::Zero();
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
  double lmax = 0.0;
};

BoundaryLimit boundary_limit(const GridSolution& sol, const BoundaryCurve& curve, double t);

/// Discrete forms of the boundary identities u_T = 0 and u_TT + u_nu K = 0.
struct BoundaryIdentities {
  double max_tangential = 0.0;
  double max_second = 0.0;
};

BoundaryIdentities boundary_identities(const GridSolution& sol, const BoundaryCurve& curve, int n_points);

enum class Theorem2Status { HypothesisFails, HypothesisMarginal, Consistent, Violation };
std::string to_string(Theorem2Status s);

struct Theorem2Report {
  Theorem2Status status = Theorem2Status::HypothesisFails;
  double boundary_max = 0.0;  // max lambda_max of the boundary limits
  double interior_max = 0.0;  // max lambda_max of the Hessian field
  bool f_hypothesis = true;   // f > 0 and f'' <= 0 on [0, max u]
};

/// If the boundary Hessian is negative semidefinite within tol_b, the interior
/// must be concave within tol_i. Boundary values within [-tol_b, tol_b] with
/// a positive interior are reported marginal rather than as a violation.
Theorem2Report theorem2_consistency(const GridSolution& sol, const BoundaryCurve& curve, double tol_b, double tol_i,
                                    int n_points = 256);

struct AnalyzeOptions {
  int margin_cells = 2;
  std::optional<double> tol;    // default 5 h
  std::optional<double> tol_b;  // default 10 h
  int boundary_points = 64;
  double claim_slack = 0.01;
};

struct ConcavityReport {
  HessianField field;
  ConcavityVerdict verdict;
  double tol = 0.0, tol_b = 0.0;
  bool strongly_concave = false;
  std::optional<SqrtConcavityReport> sqrt_check;  // torsion only
  ClaimReport claim;
  Theorem2Report theorem2;
};

ConcavityReport analyze_solution(const GridSolution& sol, const BoundaryCurve& curve, const AnalyzeOptions& options = {});

}  // namespace concave2d

#pragma once

#include <cmath>
#include <utility>

namespace concave2d {

template <typename F, typename DF>
double solve_bracketed(F&& f, DF&& df, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw GeometryError("solve_bracketed: no sign change on bracket");
  if (flo > 0.0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  // invariant: f(lo) < 0 < f(hi) (lo may exceed hi)
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0)
      lo = x;
    else
      hi = x;
    if (std::abs(hi - lo) <= tol) return 0.5 * (lo + hi);
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    const double a = std::min(lo, hi), b = std::max(lo, hi);
    if (!(next > a && next < b)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 0.25 * tol) return next;
    x = next;
  }
  return x;
}

}  // namespace concave2d

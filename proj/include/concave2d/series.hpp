#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace concave2d {

/// Truncated Taylor series c[0] + c[1] e + ... + c[N] e^N about some point.
///
/// Used to carry exact derivatives through compositions (graph
/// re-parametrization, bump functions) without hand-expanding chain rules.
template <int N>
struct Series {
  std::array<double, N + 1> c{};

  static Series constant(double v) {
    Series s;
    s.c[0] = v;
    return s;
  }

  /// The independent variable itself, expanded about v.
  static Series variable(double v) {
    Series s;
    s.c[0] = v;
    if constexpr (N >= 1) s.c[1] = 1.0;
    return s;
  }

  /// Builds a series from derivative values f(x0), f'(x0), ..., f^(N)(x0).
  static Series from_derivatives(const std::array<double, N + 1>& d) {
    Series s;
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
      if (k > 0) fact *= k;
      s.c[k] = d[k] / fact;
    }
    return s;
  }

  double value() const { return c[0]; }

  double derivative(int k) const {
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    return c[k] * fact;
  }

  std::array<double, N + 1> derivatives() const {
    std::array<double, N + 1> d{};
    for (int k = 0; k <= N; ++k) d[k] = derivative(k);
    return d;
  }

  Series& operator+=(const Series& o) {
    for (int k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Series& operator-=(const Series& o) {
    for (int k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Series& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(Series a) {
    for (auto& v : a.c) v = -v;
    return a;
  }
  friend Series operator*(Series a, double s) { return a *= s; }
  friend Series operator*(double s, Series a) { return a *= s; }
  friend Series operator+(Series a, double s) {
    a.c[0] += s;
    return a;
  }
  friend Series operator+(double s, Series a) { return a + s; }
  friend Series operator-(Series a, double s) {
    a.c[0] -= s;
    return a;
  }
  friend Series operator-(double s, const Series& a) { return -a + s; }

  friend Series operator*(const Series& a, const Series& b) {
    Series r;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }

  friend Series reciprocal(const Series& a) {
    if (a.c[0] == 0.0) throw std::domain_error("Series: reciprocal of series with zero constant term");
    Series r;
    r.c[0] = 1.0 / a.c[0];
    for (int k = 1; k <= N; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += a.c[j] * r.c[k - j];
      r.c[k] = -acc / a.c[0];
    }
    return r;
  }

  friend Series operator/(const Series& a, const Series& b) { return a * reciprocal(b); }
  friend Series operator/(Series a, double s) { return a *= 1.0 / s; }

  friend Series exp(const Series& a) {
    // y' = a' y  =>  k y_k = sum_{j=1}^k j a_j y_{k-j}
    Series r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= N; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += j * a.c[j] * r.c[k - j];
      r.c[k] = acc / k;
    }
    return r;
  }

  /// outer(inner(e)) where outer is expanded about inner's constant term.
  /// inner's constant term is ignored.
  friend Series compose(const Series& outer, const Series& inner) {
    Series shift = inner;
    shift.c[0] = 0.0;
    Series r = Series::constant(outer.c[0]);
    Series power = Series::constant(1.0);
    for (int k = 1; k <= N; ++k) {
      power = power * shift;
      r += power * outer.c[k];
    }
    return r;
  }

  /// Compositional inverse of a series with zero constant term and
  /// nonzero linear term: returns s with a(s(e)) = e.
  friend Series revert(const Series& a) {
    if (N < 1 || a.c[1] == 0.0) throw std::domain_error("Series: revert needs a nonzero linear term");
    Series s;
    s.c[1] = 1.0 / a.c[1];
    Series a0 = a;
    a0.c[0] = 0.0;
    for (int k = 2; k <= N; ++k) {
      const Series r = compose(a0, s);
      s.c[k] -= r.c[k] / a.c[1];
    }
    return s;
  }
};

}  // namespace concave2d

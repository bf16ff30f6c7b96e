#include "concave2d/spline.hpp"

#include <cmath>
#include <stdexcept>

namespace concave2d {

namespace {

// Poles of the quintic B-spline interpolation filter.
constexpr double kPoles[2] = {-0.43057534709997379, -0.043096288203264653};

void causal_anticausal(std::vector<double>& c, double z) {
  const std::size_t n = c.size();
  const double zn = std::pow(z, static_cast<double>(n));

  double sum = c[0];
  double zk = z;
  for (std::size_t k = 1; k < n && std::abs(zk) > 1e-300; ++k) {
    sum += zk * c[n - k];
    zk *= z;
  }
  c[0] = sum / (1.0 - zn);
  for (std::size_t k = 1; k < n; ++k) c[k] += z * c[k - 1];

  // c^-[n-1] = -z/(1-z^n) * sum_j z^j c^+[(n-1+j) mod n]
  sum = 0.0;
  zk = 1.0;
  for (std::size_t j = 0; j < n && std::abs(zk) > 1e-300; ++j) {
    sum += zk * c[(n - 1 + j) % n];
    zk *= z;
  }
  c[n - 1] = -z * sum / (1.0 - zn);
  for (std::size_t k = n - 1; k-- > 0;) c[k] = z * (c[k + 1] - c[k]);
}

}  // namespace

PeriodicQuinticSpline::PeriodicQuinticSpline(std::span<const double> values)
    : coef_(values.begin(), values.end()) {
  if (coef_.size() < 6) throw std::invalid_argument("PeriodicQuinticSpline: need at least 6 samples");
  double gain = 1.0;
  for (double z : kPoles) gain *= (1.0 - z) * (1.0 - 1.0 / z);
  for (auto& v : coef_) v *= gain;
  for (double z : kPoles) causal_anticausal(coef_, z);
}

std::array<double, 5> PeriodicQuinticSpline::derivatives(double u) const {
  const auto n = static_cast<long>(coef_.size());
  const double fl = std::floor(u);
  const double f = u - fl;
  const long i = static_cast<long>(fl);

  // basis[p][r] = N_{i-p+r, p}(u): uniform B-spline of degree p on knots [m, m+p+1].
  double basis[6][6] = {};
  basis[0][0] = 1.0;
  for (int p = 1; p <= 5; ++p) {
    for (int r = 0; r <= p; ++r) {
      double v = 0.0;
      if (r >= 1) v += (f + p - r) / p * basis[p - 1][r - 1];
      if (r <= p - 1) v += (r + 1 - f) / p * basis[p - 1][r];
      basis[p][r] = v;
    }
  }

  auto coef = [&](long m) {
    // d_m = c_{m+3}
    long j = (m + 3) % n;
    if (j < 0) j += n;
    return coef_[static_cast<std::size_t>(j)];
  };

  static constexpr double binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

  std::array<double, 5> out{};
  for (int k = 0; k <= 4; ++k) {
    const int p = 5 - k;
    double acc = 0.0;
    for (int r = 0; r <= p; ++r) {
      const long m = i - p + r;
      // backward difference of order k
      double d = 0.0;
      for (int l = 0; l <= k; ++l) d += ((l % 2) ? -1.0 : 1.0) * binom[k][l] * coef(m - l);
      acc += d * basis[p][r];
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

}  // namespace concave2d

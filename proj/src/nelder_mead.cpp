#include "concave2d/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace concave2d {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const std::vector<double>& steps, int max_iterations,
                             double ftol) {
  const std::size_t n = start.size();
  if (steps.size() != n) throw std::invalid_argument("nelder_mead: steps/start size mismatch");

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return objective(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);
  if (!std::isfinite(fv[0])) throw std::invalid_argument("nelder_mead: start point is infeasible");

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  auto point_along = [&](double coef, std::vector<double>& out, std::size_t worst) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
  };

  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    // stable sort keeps index order among ties, so the run is deterministic
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    if (std::isfinite(fv[worst]) && std::abs(fv[worst] - fv[best]) <= ftol * (1.0 + std::abs(fv[best]))) {
      double spread = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j < n; ++j) spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
      if (spread < 1e-12) break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

    point_along(-1.0, trial, worst);
    const double fr = eval(trial);
    if (fr < fv[best]) {
      point_along(-2.0, trial2, worst);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    // contraction (outside if the reflection improved on the worst point)
    const bool outside = fr < fv[worst];
    point_along(outside ? -0.5 : 0.5, trial2, worst);
    const double fc = eval(trial2);
    if (fc < std::min(fr, fv[worst]) || (!std::isfinite(fv[worst]) && std::isfinite(fc))) {
      simplex[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    // shrink toward the best vertex
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      fv[i] = eval(simplex[i]);
    }
  }

  const auto it = std::min_element(fv.begin(), fv.end());
  res.value = *it;
  res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
  return res;
}

}  // namespace concave2d

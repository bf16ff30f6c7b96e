#pragma once

#include <functional>
#include <vector>

namespace concave2d {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// Deterministic Nelder-Mead minimization. The objective may return +inf to
/// reject a point (extreme barrier for constraints); the start point must be finite.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const std::vector<double>& steps, int max_iterations,
                             double ftol = 1e-14);

}  // namespace concave2d

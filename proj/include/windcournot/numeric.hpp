#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "windcournot/errors.hpp"

namespace windcournot {

struct BisectionResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Root of a strictly decreasing function on [lo, hi] with f(lo) > 0 > f(hi).
/// Stops when |f| <= f_tol or the bracket is narrower than x_tol.
template <typename F>
BisectionResult bisect_decreasing(F&& f, double lo, double hi,
                                  double f_tol = 1e-12, double x_tol = 1e-13,
                                  int max_iter = 200) {
  BisectionResult out;
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double value = f(mid);
    out = {mid, value, it};
    if (std::abs(value) <= f_tol || (hi - lo) <= x_tol) {
      return out;
    }
    if (value > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw SolverFailure("bisection did not converge within iteration budget");
}

/// `steps` points from `from` to `to`, both endpoints included exactly.
inline std::vector<double> linspace(double from, double to, std::size_t steps) {
  if (steps == 0) {
    throw InvalidParameter("grid must contain at least one point");
  }
  std::vector<double> grid(steps);
  if (steps == 1) {
    grid[0] = from;
    return grid;
  }
  const double n = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = from + (to - from) * (static_cast<double>(i) / n);
  }
  grid.back() = to;
  return grid;
}

}  // namespace windcournot

#pragma once

#include <functional>
#include <span>

namespace degreenet::quad {

struct Options {
  double abs_tol = 1e-16;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The initial partition is [a, b] split at every breakpoint strictly inside
/// it; the panel with the largest error estimate is bisected until the total
/// error is below max(abs_tol, rel_tol * |value|). Throws QuadratureError when
/// max_intervals is exhausted.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints = {}, const Options& opts = {});

}  // namespace degreenet::quad

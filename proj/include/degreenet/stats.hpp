#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace degreenet::stats {

struct TestResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Two-sample chi-square on count histograms; adjacent bins are pooled until
/// each pooled bin has at least `min_count` combined observations.
TestResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b, double min_count = 10.0);

/// Goodness of fit of observed counts to probabilities (tail mass beyond the
/// last probability goes into the final bin); bins pooled until the expected
/// count reaches `min_expected`.
TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected = 5.0);

/// sup |F_n - F| for a continuous reference CDF; p_value from the asymptotic
/// Kolmogorov law.
TestResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);

/// P(K > x) for the Kolmogorov distribution.
double kolmogorov_sf(double x);

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  std::uint64_t count = 0;
};

/// Welford accumulator; deterministic for a fixed insertion order.
class Running {
 public:
  void add(double x);
  MeanVar result() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace degreenet::stats

#include "degreenet/stats.hpp"

#include <algorithm>
#include <cmath>

#include "degreenet/errors.hpp"
#include "degreenet/specfun.hpp"

namespace degreenet::stats {
namespace {

double chi2_sf(double stat, double df) {
  if (df <= 0.0) return 1.0;
  return specfun::reg_inc_gamma_upper(0.5 * df, 0.5 * stat);
}

}  // namespace

TestResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b, double min_count) {
  const std::size_t K = std::max(a.size(), b.size());
  double ra = 0.0, rb = 0.0;
  for (auto x : a) ra += static_cast<double>(x);
  for (auto x : b) rb += static_cast<double>(x);
  if (ra == 0.0 || rb == 0.0) throw DomainError("chi_square_two_sample: empty sample");

  std::vector<std::pair<double, double>> bins;
  double pa = 0.0, pb = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    pa += k < a.size() ? static_cast<double>(a[k]) : 0.0;
    pb += k < b.size() ? static_cast<double>(b[k]) : 0.0;
    if (pa + pb >= min_count) {
      bins.emplace_back(pa, pb);
      pa = pb = 0.0;
    }
  }
  if (pa + pb > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(pa, pb);
    } else {
      bins.back().first += pa;
      bins.back().second += pb;
    }
  }
  const double ka = std::sqrt(rb / ra);
  const double kb = std::sqrt(ra / rb);
  TestResult r;
  for (const auto& [x, y] : bins) {
    const double d = ka * x - kb * y;
    r.statistic += d * d / (x + y);
  }
  r.df = static_cast<double>(bins.size()) - 1.0;
  r.p_value = chi2_sf(r.statistic, r.df);
  return r;
}

TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected) {
  double total = 0.0;
  for (auto x : observed) total += static_cast<double>(x);
  if (total == 0.0) throw DomainError("chi_square_gof: no observations");
  const std::size_t K = std::max(observed.size(), probs.size());
  double psum = 0.0;
  for (double p : probs) psum += p;

  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double o = 0.0, e = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    o += k < observed.size() ? static_cast<double>(observed[k]) : 0.0;
    e += k < probs.size() ? probs[k] * total : 0.0;
    if (e >= min_expected) {
      bins.emplace_back(o, e);
      o = e = 0.0;
    }
  }
  e += std::max(0.0, 1.0 - psum) * total;
  if (bins.empty()) {
    bins.emplace_back(o, e);
  } else {
    bins.back().first += o;
    bins.back().second += e;
  }
  TestResult r;
  for (const auto& [ob, ex] : bins) {
    if (ex > 0.0) r.statistic += (ob - ex) * (ob - ex) / ex;
  }
  r.df = static_cast<double>(bins.size()) - 1.0;
  r.p_value = chi2_sf(r.statistic, r.df);
  return r;
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    s += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw DomainError("ks_one_sample: no observations");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max(d, std::max(F - i / n, (i + 1) / n - F));
  }
  TestResult r;
  r.statistic = d;
  r.df = n;
  r.p_value = kolmogorov_sf((std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d);
  return r;
}

void Running::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

MeanVar Running::result() const {
  MeanVar r;
  r.count = n_;
  r.mean = mean_;
  r.variance = n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  return r;
}

}  // namespace degreenet::stats

#include "degreenet/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "degreenet/errors.hpp"
#include "degreenet/specfun.hpp"

namespace degreenet {
namespace {

std::uint64_t degree_sum(std::span<const std::uint32_t> d) {
  std::uint64_t s = 0;
  for (auto x : d) s += x;
  return s;
}

PHat clamp_p(double v) {
  PHat p{v, false};
  if (v > 1.0) {
    p.value = 1.0;
    p.clamped = true;
  }
  return p;
}

}  // namespace

Eigen::ArrayXd pi_hat(std::span<const std::uint32_t> degrees) {
  const std::uint64_t s = degree_sum(degrees);
  if (s == 0) throw DegenerateError("pi_hat: empty graph (degree sum 0)");
  const double root = std::sqrt(static_cast<double>(s));
  Eigen::ArrayXd out(static_cast<Eigen::Index>(degrees.size()));
  for (std::size_t i = 0; i < degrees.size(); ++i) out[i] = degrees[i] / root;
  return out;
}

PHat p_hat(std::span<const std::uint32_t> degrees, std::size_t i, std::size_t j) {
  if (i == j || i >= degrees.size() || j >= degrees.size()) {
    throw DomainError("p_hat: need distinct valid indices");
  }
  const std::uint64_t s = degree_sum(degrees);
  if (s == 0) throw DegenerateError("p_hat: empty graph (degree sum 0)");
  const double root = std::sqrt(static_cast<double>(s));
  return clamp_p((degrees[i] / root) * (degrees[j] / root));
}

PHat EstimateReport::p_hat(Eigen::Index i, Eigen::Index j) const {
  if (i == j || i < 0 || j < 0 || i >= pi_hat.size() || j >= pi_hat.size()) {
    throw DomainError("p_hat: need distinct valid indices");
  }
  return clamp_p(pi_hat[i] * pi_hat[j]);
}

EstimateReport clt_report(std::span<const std::uint32_t> degrees, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("clt_report: level must lie in (0, 1)");
  EstimateReport r;
  r.pi_hat = pi_hat(degrees);
  r.degree_sum = degree_sum(degrees);
  r.level = level;
  r.z = specfun::normal_quantile(0.5 * (1.0 + level));
  const double root = std::sqrt(std::sqrt(static_cast<double>(r.degree_sum)));
  r.std_errors = r.pi_hat.sqrt() / root;
  r.lower = r.pi_hat - r.z * r.std_errors;
  r.upper = r.pi_hat + r.z * r.std_errors;
  r.low_degree_warning =
      std::any_of(degrees.begin(), degrees.end(), [](std::uint32_t d) { return d < 10; });
  return r;
}

Eigen::ArrayXd standardized_residuals(const EstimateReport& report, const Eigen::ArrayXd& pi) {
  if (pi.size() != report.pi_hat.size()) throw DomainError("standardized_residuals: size mismatch");
  return (report.pi_hat - pi) / report.std_errors;
}

ExponentFit fit_exponent(std::span<const std::uint32_t> degrees, std::uint32_t min_degree) {
  if (degrees.size() < 10) throw InsufficientDataError("fit_exponent: need n >= 10");
  const auto nonzero = std::count_if(degrees.begin(), degrees.end(),
                                     [](std::uint32_t d) { return d > 0; });
  if (nonzero < 10) throw InsufficientDataError("fit_exponent: need at least 10 nonzero degrees");
  std::vector<std::uint32_t> d(degrees.begin(), degrees.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  const double half_log_sum = 0.5 * std::log(static_cast<double>(degree_sum(degrees)));

  std::vector<double> x, y;
  for (std::size_t i = 0; i < d.size() && d[i] >= min_degree; ++i) {
    x.push_back(std::log(static_cast<double>(i + 1)));
    y.push_back(std::log(static_cast<double>(d[i])) - half_log_sum);
  }
  if (x.size() < 2) {
    throw InsufficientDataError("fit_exponent: fewer than two ranks with degree >= " +
                                std::to_string(min_degree));
  }
  const Eigen::Map<const Eigen::ArrayXd> X(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::ArrayXd> Y(y.data(), static_cast<Eigen::Index>(y.size()));
  const double mx = X.mean();
  const double my = Y.mean();
  const double sxx = (X - mx).square().sum();
  const double sxy = ((X - mx) * (Y - my)).sum();
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  const Eigen::ArrayXd resid = Y - (intercept + slope * X);
  const double syy = (Y - my).square().sum();

  ExponentFit fit;
  fit.gamma_hat = -slope;
  fit.theta_hat = std::exp(intercept);
  fit.ranks_used = x.size();
  fit.min_degree = min_degree;
  fit.r_squared = syy > 0.0 ? 1.0 - resid.square().sum() / syy : 1.0;
  fit.residual_sd =
      x.size() > 2 ? std::sqrt(resid.square().sum() / static_cast<double>(x.size() - 2)) : 0.0;
  return fit;
}

std::vector<std::uint32_t> degrees_from_edges(std::span<const Edge> edges, std::size_t n,
                                              bool one_indexed) {
  std::vector<std::uint32_t> d(n, 0);
  const std::uint32_t shift = one_indexed ? 1 : 0;
  for (const auto& [a, b] : edges) {
    if (a < shift || b < shift || a - shift >= n || b - shift >= n) {
      throw DomainError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") references a node outside [" + std::to_string(shift) + ", " +
                        std::to_string(n - 1 + shift) + "]");
    }
    if (a == b) throw DomainError("self-loop at node " + std::to_string(a));
    ++d[a - shift];
    ++d[b - shift];
  }
  return d;
}

}  // namespace degreenet

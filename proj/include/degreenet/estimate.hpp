#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "degreenet/sampler.hpp"

namespace degreenet {

/// pi_hat_i = d_i / sqrt(||d||_1). Throws DegenerateError on an empty graph.
Eigen::ArrayXd pi_hat(std::span<const std::uint32_t> degrees);

struct PHat {
  double value = 0.0;
  bool clamped = false;
};

/// d_i d_j / ||d||_1, clamped to [0, 1] (0-based, i != j).
PHat p_hat(std::span<const std::uint32_t> degrees, std::size_t i, std::size_t j);

struct EstimateReport {
  Eigen::ArrayXd pi_hat;
  Eigen::ArrayXd std_errors;
  Eigen::ArrayXd lower;
  Eigen::ArrayXd upper;
  double level = 0.95;
  double z = 1.959963984540054;
  std::uint64_t degree_sum = 0;
  bool low_degree_warning = false;  ///< some d_i < 10

  PHat p_hat(Eigen::Index i, Eigen::Index j) const;
};

/// Plug-in standard errors sqrt(pi_hat_i / sqrt(||d||_1)) and Normal intervals.
EstimateReport clt_report(std::span<const std::uint32_t> degrees, double level = 0.95);

/// (pi_hat_i - pi_i) / se_i.
Eigen::ArrayXd standardized_residuals(const EstimateReport& report, const Eigen::ArrayXd& pi);

struct ExponentFit {
  double gamma_hat = 0.0;
  double theta_hat = 0.0;
  double r_squared = 0.0;
  double residual_sd = 0.0;
  std::size_t ranks_used = 0;
  std::uint32_t min_degree = 10;
};

/// Least squares of log pi_hat_(i) on log i over ranks with d_(i) >= min_degree.
/// Throws InsufficientDataError with n < 10, fewer than 10 nonzero degrees, or
/// fewer than two usable ranks.
ExponentFit fit_exponent(std::span<const std::uint32_t> degrees, std::uint32_t min_degree = 10);

/// Degree tally of an edge list over n nodes; ids are shifted down by one
/// when one_indexed.
std::vector<std::uint32_t> degrees_from_edges(std::span<const Edge> edges, std::size_t n,
                                              bool one_indexed = false);

}  // namespace degreenet

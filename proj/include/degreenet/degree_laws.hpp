#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "degreenet/quadrature.hpp"
#include "degreenet/weights.hpp"

namespace degreenet {

enum class Provenance {
  exact_dp,
  quadrature,
  pareto_closed_form,
  smooth_repro,
  sparse_beta,
  sparse_gamma,
  extreme_limit,
};

std::string_view to_string(Provenance p);

struct Column {
  std::string name;
  Eigen::ArrayXd values;
};

/// A pmf over k = 0..K with its provenance and moment summaries.
struct DegreeLaw {
  Eigen::ArrayXd pmf;
  Provenance provenance = Provenance::exact_dp;
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double mass_defect = 0.0;               ///< 1 - sum(pmf)
  std::vector<Column> columns;            ///< auxiliary per-k columns
  std::vector<std::int64_t> fallback_k;   ///< entries computed by quadrature instead

  const Eigen::ArrayXd* column(std::string_view name) const;
  double dispersion() const { return variance / mean; }
};

/// Fill mean, variance and mass_defect from pmf.
void summarize(DegreeLaw& law);

struct ConditionalMoments {
  double mean = 0.0;
  double variance = 0.0;
  double dispersion = 1.0;
  double disp_gap_lower = 0.0;  ///< E(d_i | pi) / (n-1)
  double disp_gap_upper = 0.0;  ///< pi_i
};

struct MarginalMoments {
  double mean = 0.0;
  double variance = 0.0;
  double covariance = 0.0;
  double dispersion = 1.0;
  double correlation = 0.0;
};

/// Exact law of a sum of independent Bernoulli(probs[j]) by sequential
/// convolution, O(m^2).
DegreeLaw poisson_binomial_pmf(std::span<const double> probs);

/// Law of d_i given pi (0-based i).
DegreeLaw conditional_degree_law(const WeightVector& pi, Eigen::Index i);

/// Throws DegenerateError when sum_{j != i} pi_j == 0 or pi_i == 0.
ConditionalMoments conditional_moments(const WeightVector& pi, Eigen::Index i);

/// cov(d_i, d_j | pi) = pi_i pi_j (1 - pi_i pi_j), i != j.
double conditional_covariance(const WeightVector& pi, Eigen::Index i, Eigen::Index j);

/// Moments of a degree when pi_1..pi_n are i.i.d. with mean mu and variance
/// sigma2. The covariance is mu^2 {1 - mu^2 + 3(n-2) sigma2}, which reduces
/// to the variance at n = 2.
MarginalMoments marginal_moments(double mu, double sigma2, std::int64_t n);

struct LawOptions {
  quad::Options quad{1e-300, 1e-11, 4000};
  /// Largest k evaluated; -1 means n - 1.
  std::int64_t k_max = -1;
};

/// P(d = k) = int f(pi) Binomial(n-1, mu pi)(k) dpi by adaptive quadrature.
DegreeLaw marginal_pmf_quadrature(const MixingModel& F, std::int64_t n,
                                  const LawOptions& opts = {});

/// Bounded Pareto closed form. The Gamma-function ratio is carried exactly
/// (column "eps_exact"); "eps_leading" is beta(beta-1)(n-k)/(2nk) and
/// "pmf_leading" the pmf with that first-order factor instead. Entries with
/// k <= beta are computed by quadrature and listed in fallback_k.
DegreeLaw pareto_population_pmf(const BoundedParetoModel& model, std::int64_t n,
                                const LawOptions& opts = {});

/// n mu P(d = k) ~ f((k+1) iota_{k,n}(mu) / ((n+1) mu)) I_mu(k+1, n-k).
/// Columns: "arg", "tail" (I_mu), "heuristic" (Normal-tail simplification).
DegreeLaw smooth_repro_pmf(const SmoothDensityModel& model, std::int64_t n,
                           const LawOptions& opts = {});

/// Beta form with mu replaced by mu_n.
DegreeLaw sparse_beta_pmf(const SmoothDensityModel& model, double mu_n, std::int64_t n,
                          const LawOptions& opts = {});

/// Gamma form with n_k = n-k-1, lambda_k = n_k mu_n:
/// pmf = f((k+1) rho_k(lambda_k) / lambda_k) P(k+1, lambda_k)
///       Gamma(n_k+k+1) / (Gamma(n_k+1) n_k^k) / lambda_k.
DegreeLaw sparse_gamma_pmf(const SmoothDensityModel& model, double mu_n, std::int64_t n,
                           const LawOptions& opts = {});

/// Selects the Beta form for gamma <= 1/4 and the Gamma form for
/// 1/4 < gamma <= 1/2. Throws RegimeError outside (0, 1/2] or with zeta' != 0.
DegreeLaw sparse_pmf(const SmoothDensityModel& model, const ScalingMap& map, std::int64_t n,
                     const LawOptions& opts = {});

/// Limit law of d under pi(n) = sqrt(zeta/n) pi: a mixed Poisson(mu zeta t),
/// t ~ f. Throws DomainError if the mass beyond k_max exceeds 1e-12.
/// Columns: "approx" (Poisson-tail approximation), "rel_error", "bound".
DegreeLaw extreme_sparse_pmf(const SmoothDensityModel& model, double zeta, std::int64_t k_max,
                             const quad::Options& qopts = {1e-300, 1e-12, 4000});

struct TvResult {
  double tv = 0.0;
  double bound_scale = 0.0;
};

/// Total variation distance between the law of d_i given pi and
/// Poisson(E(d_i | pi)); bound_scale = min(E, 1)(1 - Var/E).
TvResult tv_distance_to_poisson(const WeightVector& pi, Eigen::Index i);

/// Poisson(lambda) pmf truncated where the remaining tail drops below tail_tol.
Eigen::ArrayXd poisson_pmf_truncated(double lambda, double tail_tol = 1e-14);

}  // namespace degreenet

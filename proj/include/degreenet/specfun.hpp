#pragma once

#include <cstdint>

namespace degreenet::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Hoeffding sandwich and Berry-Esseen Normal approximation for the Binomial
/// survival value I_mu(k+1, n-k) = P(Binomial(n, mu) >= k+1).
struct SurvivalBounds {
  double lower = 0.0;
  double upper = 1.0;
  double normal_approx = 0.5;
};

// ---------------------------------------------------------------------------
// Incomplete Beta
// ---------------------------------------------------------------------------

/// Regularized incomplete Beta function I_x(a, b).
///
/// Modified Lentz continued fraction, evaluated directly when
/// x < (a+1)/(a+b+2) and through I_x(a,b) = 1 - I_{1-x}(b,a) otherwise. The
/// prefactor x^a (1-x)^b / B(a,b) is formed from saddle-point (Loader) terms,
/// so large a and b do not lose digits to lgamma cancellation.
///
/// Throws DomainError unless 0 <= x <= 1, a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

/// 1 - I_x(a, b), accurate when I_x(a, b) is close to one.
double reg_inc_beta_complement(double x, double a, double b);

/// log I_x(a, b). Finite wherever I_x(a, b) > 0, including values far below
/// the smallest normal double.
double log_reg_inc_beta(double x, double a, double b);

/// log(1 - I_x(a, b)).
double log_reg_inc_beta_complement(double x, double a, double b);

// ---------------------------------------------------------------------------
// Binomial
// ---------------------------------------------------------------------------

/// log of the Binomial(n, p) mass at x, for real 0 <= x <= n (Loader's
/// saddle-point form; relative accuracy near machine precision for large n).
double log_binom_pmf(double x, double n, double p);
double binom_pmf(std::int64_t k, std::int64_t n, double p);

/// P(X >= k+1) for X ~ Binomial(n, mu), i.e. I_mu(k+1, n-k).
/// Requires 0 <= k < n and 0 < mu < 1.
double binom_survival(std::int64_t k, std::int64_t n, double mu);

/// P(X <= k) for X ~ Binomial(n, mu); binom_cdf + binom_survival == 1.
double binom_cdf(std::int64_t k, std::int64_t n, double mu);

SurvivalBounds survival_bounds(std::int64_t k, std::int64_t n, double mu);

/// I_x(a+1, b) / I_x(a, b) = 1 - x^a (1-x)^b / (a B(a,b) I_x(a,b)), in log space.
/// Throws NumericError if I_x(a, b) underflows even in log space.
double beta_tail_ratio(double x, double a, double b);

/// iota_{k,n}(mu) = I_mu(k+2, n-k) / I_mu(k+1, n-k)
///               = 1 - (1-mu) P(X = k+1) / P(X >= k+1),  X ~ Binomial(n, mu).
/// Evaluated in log space; lies in [mu, 1).
double iota(std::int64_t k, std::int64_t n, double mu);

// ---------------------------------------------------------------------------
// Incomplete Gamma / Poisson
// ---------------------------------------------------------------------------

/// Regularized lower incomplete Gamma function P(a, x). Series for
/// x < a + 1, continued fraction otherwise.
double reg_inc_gamma_lower(double a, double x);
double reg_inc_gamma_upper(double a, double x);
double log_reg_inc_gamma_lower(double a, double x);
double log_reg_inc_gamma_upper(double a, double x);

/// log of x^a e^{-x} / Gamma(a+1): the Poisson(x) mass at real a >= 0.
double log_poisson_pmf(double a, double x);
double poisson_pmf(std::int64_t k, double lambda);

/// P(a+1, x) / P(a, x) = 1 - x^a e^{-x} / (Gamma(a+1) P(a, x)).
double gamma_tail_ratio(double a, double x);

/// rho_k(lambda) = P(k+2, lambda) / P(k+1, lambda)
///              = 1 - P(Y = k+1) / P(Y >= k+1),  Y ~ Poisson(lambda).
double rho(std::int64_t k, double lambda);

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

/// (z-beta)^beta { 1 + beta(beta-1)/(2z)
///                   + (3beta+2)(beta+1)beta(beta-1)/(24 z^2) },
/// the second-order expansion of Gamma(z)/Gamma(z-beta). Requires z > beta >= 0.
double gamma_ratio_expansion(double z, double beta);

struct PowerSum {
  double exact = 0.0;       ///< sum_{i=1}^n i^{-delta}, compensated
  double asymptotic = 0.0;  ///< leading form for delta < 1, == 1, > 1
};

PowerSum power_sum(std::int64_t n, double delta);

/// Riemann zeta for real s > 1 (Euler-Maclaurin).
double riemann_zeta(double s);

// ---------------------------------------------------------------------------
// Standard Normal
// ---------------------------------------------------------------------------

double normal_cdf(double z);
/// 1 - Phi(z) without cancellation for large z.
double normal_sf(double z);
/// Phi^{-1}(p) (Wichura AS 241), 0 < p < 1.
double normal_quantile(double p);

}  // namespace degreenet::specfun

#include "degreenet/degree_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "degreenet/errors.hpp"
#include "degreenet/specfun.hpp"
#include "degreenet/summation.hpp"

namespace degreenet {
namespace {

namespace sf = specfun;

std::int64_t last_k(std::int64_t n, const LawOptions& opts) {
  if (opts.k_max < 0) return n - 1;
  return std::min<std::int64_t>(opts.k_max, n - 1);
}

double log1mexp(double l) {
  return l > -std::log(2.0) ? std::log(-std::expm1(l)) : std::log1p(-std::exp(l));
}

bool is_small_integer(double x) { return x == std::floor(x) && x >= 0.0 && x <= 64.0; }

// log Gamma(z+1)/Gamma(z+1-beta), exact product form for integer beta.
double log_gamma_ratio(double z, double beta) {
  if (is_small_integer(beta)) {
    double s = 0.0;
    for (int j = 0; j < static_cast<int>(beta); ++j) s += std::log(z - j);
    return s;
  }
  return std::lgamma(z + 1.0) - std::lgamma(z + 1.0 - beta);
}

// Binomial(n-1, mu t) mass at k, integrated against the mixing density.
double mixture_entry(const MixingModel& F, double mu, std::int64_t n, std::int64_t k,
                     const quad::Options& qopts) {
  const auto [lo, hi] = mixing_support(F);
  const double m = static_cast<double>(n - 1);
  const double dk = static_cast<double>(k);
  const double mode = dk / (m * mu);
  // The kernel is unimodal in t; scaling by its peak over the support keeps
  // deep-tail entries out of the subnormal range during integration.
  const double peak = sf::log_binom_pmf(dk, m, std::clamp(mode, lo, hi) * mu);
  auto integrand = [&](double t) {
    const double dens = mixing_density(F, t);
    if (dens == 0.0) return 0.0;
    return dens * std::exp(sf::log_binom_pmf(dk, m, t * mu) - peak);
  };
  const double s = std::sqrt(std::max(dk, 1.0)) / (m * mu);
  const double cuts[] = {mode - 6 * s, mode - 2 * s, mode, mode + 2 * s, mode + 6 * s};
  const double v = quad::integrate(integrand, lo, hi, cuts, qopts).value;
  return v > 0.0 ? std::exp(std::log(v) + peak) : 0.0;
}

DegreeLaw repro_law(const SmoothDensityModel& model, double mu, std::int64_t n,
                    const LawOptions& opts, Provenance prov, bool with_heuristic) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("reproduction law needs 0 < mu < 1");
  const std::int64_t K = last_k(n, opts);
  const double dn = static_cast<double>(n);
  const double nmu = dn * mu;
  DegreeLaw law;
  law.provenance = prov;
  law.n = n;
  law.pmf = Eigen::ArrayXd::Zero(K + 1);
  Eigen::ArrayXd arg = Eigen::ArrayXd::Zero(K + 1);
  Eigen::ArrayXd tail = Eigen::ArrayXd::Zero(K + 1);
  Eigen::ArrayXd heur = Eigen::ArrayXd::Zero(K + 1);
  const double sd = std::sqrt(nmu * (1.0 - mu));
  for (std::int64_t k = 0; k <= K; ++k) {
    const double dk = static_cast<double>(k);
    if (with_heuristic) {
      heur[k] = model.f(std::min(dk / nmu, 1.0)) * sf::normal_sf((dk - nmu) / sd) / nmu;
    }
    const double I = std::exp(sf::log_reg_inc_beta(mu, dk + 1.0, dn - dk));
    if (I == 0.0) {
      if (dk > nmu) break;
      continue;
    }
    const double io = sf::iota(k, n, mu);
    arg[k] = std::min((dk + 1.0) * io / ((dn + 1.0) * mu), 1.0);
    tail[k] = I;
    law.pmf[k] = model.f(arg[k]) * I / nmu;
  }
  law.columns.push_back({"arg", arg});
  law.columns.push_back({"tail", tail});
  if (with_heuristic) law.columns.push_back({"heuristic", heur});
  summarize(law);
  return law;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::exact_dp: return "exact_dp";
    case Provenance::quadrature: return "quadrature";
    case Provenance::pareto_closed_form: return "pareto_closed_form";
    case Provenance::smooth_repro: return "smooth_repro";
    case Provenance::sparse_beta: return "sparse_beta";
    case Provenance::sparse_gamma: return "sparse_gamma";
    case Provenance::extreme_limit: return "extreme_limit";
  }
  return "unknown";
}

const Eigen::ArrayXd* DegreeLaw::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c.values;
  }
  return nullptr;
}

void summarize(DegreeLaw& law) {
  CompensatedSum s0, s1, s2;
  for (Eigen::Index k = 0; k < law.pmf.size(); ++k) {
    const double p = law.pmf[k];
    const double dk = static_cast<double>(k);
    s0 += p;
    s1 += dk * p;
    s2 += dk * dk * p;
  }
  law.mass_defect = 1.0 - s0.value();
  law.mean = s1.value();
  // Central second moment in a second pass avoids E(d^2) - E(d)^2 cancellation.
  CompensatedSum c2;
  for (Eigen::Index k = 0; k < law.pmf.size(); ++k) {
    const double d = static_cast<double>(k) - law.mean;
    c2 += d * d * law.pmf[k];
  }
  law.variance = c2.value();
}

DegreeLaw poisson_binomial_pmf(std::span<const double> probs) {
  const std::size_t m = probs.size();
  if (m < 1) throw DomainError("poisson_binomial_pmf: need at least one probability");
  Eigen::ArrayXd pmf = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(m) + 1);
  pmf[0] = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double p = probs[j];
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("poisson_binomial_pmf: prob outside [0, 1]");
    const double q = 1.0 - p;
    for (std::size_t k = j + 1; k >= 1; --k) {
      pmf[k] = pmf[k] * q + pmf[k - 1] * p;
    }
    pmf[0] *= q;
  }
  DegreeLaw law;
  law.pmf = std::move(pmf);
  law.provenance = Provenance::exact_dp;
  law.n = static_cast<std::int64_t>(m) + 1;
  summarize(law);
  return law;
}

namespace {
std::vector<double> edge_probs(const WeightVector& pi, Eigen::Index i) {
  if (i < 0 || i >= pi.size()) throw DomainError("node index out of range");
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(pi.size()) - 1);
  for (Eigen::Index j = 0; j < pi.size(); ++j) {
    if (j != i) p.push_back(pi[i] * pi[j]);
  }
  return p;
}
}  // namespace

DegreeLaw conditional_degree_law(const WeightVector& pi, Eigen::Index i) {
  const auto p = edge_probs(pi, i);
  return poisson_binomial_pmf(p);
}

ConditionalMoments conditional_moments(const WeightVector& pi, Eigen::Index i) {
  if (i < 0 || i >= pi.size()) throw DomainError("node index out of range");
  CompensatedSum l1, l2, var;
  for (Eigen::Index j = 0; j < pi.size(); ++j) {
    if (j == i) continue;
    l1 += pi[j];
    l2 += pi[j] * pi[j];
    const double p = pi[i] * pi[j];
    var += p * (1.0 - p);
  }
  ConditionalMoments out;
  out.mean = pi[i] * l1.value();
  out.variance = var.value();
  if (l1.value() == 0.0 || out.mean == 0.0) {
    throw DegenerateError("dispersion undefined: node " + std::to_string(i + 1) +
                          " has zero expected degree");
  }
  out.dispersion = 1.0 - pi[i] * l2.value() / l1.value();
  out.disp_gap_lower = out.mean / static_cast<double>(pi.size() - 1);
  out.disp_gap_upper = pi[i];
  return out;
}

double conditional_covariance(const WeightVector& pi, Eigen::Index i, Eigen::Index j) {
  if (i == j || i < 0 || j < 0 || i >= pi.size() || j >= pi.size()) {
    throw DomainError("conditional_covariance: need distinct valid indices");
  }
  const double p = pi[i] * pi[j];
  return p * (1.0 - p);
}

MarginalMoments marginal_moments(double mu, double sigma2, std::int64_t n) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("marginal_moments: need 0 <= mu <= 1");
  if (!(sigma2 >= 0.0) || sigma2 > mu * (1.0 - mu) * (1.0 + 1e-12) + 1e-300) {
    throw DomainError("marginal_moments: need 0 <= sigma2 <= mu(1-mu)");
  }
  if (n < 2) throw DomainError("marginal_moments: need n >= 2");
  const double m = static_cast<double>(n);
  const double mu2 = mu * mu;
  MarginalMoments out;
  out.mean = (m - 1.0) * mu2;
  out.dispersion = (m - 2.0) * sigma2 + 1.0 - mu2;
  out.variance = out.mean * out.dispersion;
  out.covariance = mu2 * (1.0 - mu2 + 3.0 * (m - 2.0) * sigma2);
  out.correlation = out.variance > 0.0 ? out.covariance / out.variance : 0.0;
  return out;
}

DegreeLaw marginal_pmf_quadrature(const MixingModel& F, std::int64_t n, const LawOptions& opts) {
  if (n < 2) throw DomainError("marginal_pmf_quadrature: need n >= 2");
  const std::int64_t K = last_k(n, opts);
  DegreeLaw law;
  law.provenance = Provenance::quadrature;
  law.n = n;
  law.pmf = Eigen::ArrayXd::Zero(K + 1);
  if (const auto* pm = std::get_if<PointMassModel>(&F)) {
    pm->validate();
    const double p = pm->value * pm->value;
    for (std::int64_t k = 0; k <= K; ++k) {
      law.pmf[k] = std::exp(sf::log_binom_pmf(static_cast<double>(k), static_cast<double>(n - 1), p));
    }
  } else {
    const double mu = mixing_moments(F).mu;
    for (std::int64_t k = 0; k <= K; ++k) law.pmf[k] = mixture_entry(F, mu, n, k, opts.quad);
  }
  summarize(law);
  return law;
}

DegreeLaw pareto_population_pmf(const BoundedParetoModel& model, std::int64_t n,
                                const LawOptions& opts) {
  model.validate();
  if (n < 2) throw DomainError("pareto_population_pmf: need n >= 2");
  const std::int64_t K = last_k(n, opts);
  const double beta = model.beta;
  const double mu = model.raw_moment(1);
  const double dn = static_cast<double>(n);
  const double nmu = dn * mu;
  const MixingModel F = model;

  DegreeLaw law;
  law.provenance = Provenance::pareto_closed_form;
  law.n = n;
  law.pmf = Eigen::ArrayXd::Zero(K + 1);
  Eigen::ArrayXd eps_exact = Eigen::ArrayXd::Zero(K + 1);
  Eigen::ArrayXd eps_lead = Eigen::ArrayXd::Zero(K + 1);
  Eigen::ArrayXd pmf_lead = Eigen::ArrayXd::Zero(K + 1);
  const double xa = mu * model.a;
  const double xb = mu * model.b;

  for (std::int64_t k = 0; k <= K; ++k) {
    const double dk = static_cast<double>(k);
    if (!(dk > beta)) {
      law.pmf[k] = mixture_entry(F, mu, n, k, opts.quad);
      pmf_lead[k] = law.pmf[k];
      law.fallback_k.push_back(k);
      continue;
    }
    const double a1 = dk + 1.0 - beta;
    const double b1 = dn - dk;
    // log (I_{mu b} - I_{mu a})(a1, b1)
    double log_diff;
    const double log_ia = xa > 0.0 ? sf::log_reg_inc_beta(xa, a1, b1)
                                   : -std::numeric_limits<double>::infinity();
    if (log_ia > std::log(0.5)) {
      const double lca = sf::log_reg_inc_beta_complement(xa, a1, b1);
      const double lcb = sf::log_reg_inc_beta_complement(xb, a1, b1);
      log_diff = lca + log1mexp(lcb - lca);
    } else {
      const double lib = sf::log_reg_inc_beta(xb, a1, b1);
      log_diff = lib + log1mexp(log_ia - lib);
    }
    // 1 + eps = Gamma(n+1) Gamma(k+1-beta) / (Gamma(n+1-beta) Gamma(k+1)) (k/n)^beta
    double log1p_eps;
    if (is_small_integer(beta)) {
      double s = 0.0;
      for (int j = 0; j < static_cast<int>(beta); ++j) s += std::log(dn - j) - std::log(dk - j);
      log1p_eps = s - beta * (std::log(dn) - std::log(dk));
    } else {
      log1p_eps = log_gamma_ratio(dn, beta) - log_gamma_ratio(dk, beta) -
                  beta * (std::log(dn) - std::log(dk));
    }
    eps_exact[k] = std::expm1(log1p_eps);
    eps_lead[k] = beta * (beta - 1.0) * (dn - dk) / (2.0 * dn * dk);
    const double log_core =
        std::log(model.c) - beta * (std::log(dk) - std::log(nmu)) + log_diff - std::log(nmu);
    law.pmf[k] = std::exp(log_core + log1p_eps);
    pmf_lead[k] = std::exp(log_core) * (1.0 + eps_lead[k]);
  }
  law.columns.push_back({"eps_exact", eps_exact});
  law.columns.push_back({"eps_leading", eps_lead});
  law.columns.push_back({"pmf_leading", pmf_lead});
  summarize(law);
  return law;
}

DegreeLaw smooth_repro_pmf(const SmoothDensityModel& model, std::int64_t n,
                           const LawOptions& opts) {
  if (n < 2) throw DomainError("smooth_repro_pmf: need n >= 2");
  return repro_law(model, model.mu, n, opts, Provenance::smooth_repro, true);
}

DegreeLaw sparse_beta_pmf(const SmoothDensityModel& model, double mu_n, std::int64_t n,
                          const LawOptions& opts) {
  return repro_law(model, mu_n, n, opts, Provenance::sparse_beta, false);
}

DegreeLaw sparse_gamma_pmf(const SmoothDensityModel& model, double mu_n, std::int64_t n,
                           const LawOptions& opts) {
  if (!(mu_n > 0.0 && mu_n < 1.0)) throw DomainError("sparse_gamma_pmf: need 0 < mu_n < 1");
  const std::int64_t K = std::min(last_k(n, opts), n - 2);
  DegreeLaw law;
  law.provenance = Provenance::sparse_gamma;
  law.n = n;
  law.pmf = Eigen::ArrayXd::Zero(last_k(n, opts) + 1);
  Eigen::ArrayXd arg = Eigen::ArrayXd::Zero(law.pmf.size());
  Eigen::ArrayXd corr = Eigen::ArrayXd::Zero(law.pmf.size());
  for (std::int64_t k = 0; k <= K; ++k) {
    const double dk = static_cast<double>(k);
    const double nk = static_cast<double>(n - k - 1);
    const double lambda = nk * mu_n;
    const double logP = sf::log_reg_inc_gamma_lower(dk + 1.0, lambda);
    const double logG = std::lgamma(nk + dk + 1.0) - std::lgamma(nk + 1.0) - dk * std::log(nk);
    corr[k] = std::exp(logG);
    const double mass = std::exp(logP + logG) / lambda;
    if (mass == 0.0) {
      if (dk > lambda) break;
      continue;
    }
    arg[k] = std::min((dk + 1.0) * sf::rho(k, lambda) / lambda, 1.0);
    law.pmf[k] = model.f(arg[k]) * mass;
  }
  law.columns.push_back({"arg", arg});
  law.columns.push_back({"gamma_correction", corr});
  summarize(law);
  return law;
}

DegreeLaw sparse_pmf(const SmoothDensityModel& model, const ScalingMap& map, std::int64_t n,
                     const LawOptions& opts) {
  map.validate();
  if (map.zeta_prime != 0.0) throw RegimeError("sparse_pmf: only zeta' = 0 is supported");
  if (!(map.gamma > 0.0 && map.gamma <= 0.5)) {
    throw RegimeError("sparse_pmf: gamma must lie in (0, 1/2]");
  }
  if (!(map.zeta > 0.0)) throw DomainError("sparse_pmf: need zeta > 0");
  const double dn = static_cast<double>(n);
  if (n < 2 || std::pow(dn, 2.0 * map.gamma) < map.zeta) {
    throw DomainError("sparse_pmf: need n >= 2 and n^{2 gamma} >= zeta");
  }
  const double mu_n = map.mu_n(model.mu, n);
  if (map.gamma <= 0.25) return sparse_beta_pmf(model, mu_n, n, opts);
  return sparse_gamma_pmf(model, mu_n, n, opts);
}

DegreeLaw extreme_sparse_pmf(const SmoothDensityModel& model, double zeta, std::int64_t k_max,
                             const quad::Options& qopts) {
  if (!(zeta > 0.0)) throw DomainError("extreme_sparse_pmf: need zeta > 0");
  if (k_max < 0) throw DomainError("extreme_sparse_pmf: need k_max >= 0");
  const double lambda = model.mu * zeta;
  const double kmax1 = static_cast<double>(k_max + 1);
  const double tail = quad::integrate(
      [&](double t) {
        return t == 0.0 ? 0.0 : model.f(t) * sf::reg_inc_gamma_lower(kmax1, lambda * t);
      },
      0.0, 1.0, {}, {1e-16, 1e-10, 4000}).value;
  if (tail > 1e-12) {
    throw DomainError("extreme_sparse_pmf: k_max = " + std::to_string(k_max) +
                      " leaves tail mass " + std::to_string(tail) + " > 1e-12");
  }
  DegreeLaw law;
  law.provenance = Provenance::extreme_limit;
  law.n = 0;
  law.pmf = Eigen::ArrayXd::Zero(k_max + 1);
  Eigen::ArrayXd approx = Eigen::ArrayXd::Zero(k_max + 1);
  Eigen::ArrayXd rel = Eigen::ArrayXd::Zero(k_max + 1);
  const double c = model.f_min > 0.0 ? model.f2_sup / (2.0 * model.mu * model.f_min)
                                     : std::numeric_limits<double>::infinity();
  Eigen::ArrayXd bound = Eigen::ArrayXd::Constant(k_max + 1, c / zeta);
  for (std::int64_t k = 0; k <= k_max; ++k) {
    const double dk = static_cast<double>(k);
    auto integrand = [&](double t) { return model.f(t) * std::exp(sf::log_poisson_pmf(dk, lambda * t)); };
    const double cut[] = {dk / lambda};
    law.pmf[k] = quad::integrate(integrand, 0.0, 1.0, cut, qopts).value;
    const double arg = std::min((dk + 1.0) * sf::rho(k, lambda) / lambda, 1.0);
    approx[k] = model.f(arg) * sf::reg_inc_gamma_lower(dk + 1.0, lambda) / lambda;
    rel[k] = approx[k] > 0.0 ? law.pmf[k] / approx[k] - 1.0 : 0.0;
  }
  law.columns.push_back({"approx", approx});
  law.columns.push_back({"rel_error", rel});
  law.columns.push_back({"bound", bound});
  summarize(law);
  return law;
}

Eigen::ArrayXd poisson_pmf_truncated(double lambda, double tail_tol) {
  if (!(lambda > 0.0)) throw DomainError("poisson_pmf_truncated: need lambda > 0");
  std::vector<double> v;
  for (std::int64_t k = 0;; ++k) {
    v.push_back(sf::poisson_pmf(k, lambda));
    const double dk = static_cast<double>(k);
    if (dk >= lambda && sf::reg_inc_gamma_lower(dk + 1.0, lambda) < tail_tol) break;
  }
  return Eigen::Map<Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TvResult tv_distance_to_poisson(const WeightVector& pi, Eigen::Index i) {
  const ConditionalMoments cm = conditional_moments(pi, i);
  const DegreeLaw pb = conditional_degree_law(pi, i);
  const Eigen::ArrayXd pois = poisson_pmf_truncated(cm.mean);
  const Eigen::Index K = std::max(pb.pmf.size(), pois.size());
  CompensatedSum s;
  for (Eigen::Index k = 0; k < K; ++k) {
    const double a = k < pb.pmf.size() ? pb.pmf[k] : 0.0;
    const double b = k < pois.size() ? pois[k] : 0.0;
    s += std::abs(a - b);
  }
  // Poisson mass beyond the truncation point is all unmatched.
  s += sf::reg_inc_gamma_lower(static_cast<double>(pois.size()), cm.mean);
  TvResult out;
  out.tv = 0.5 * s.value();
  out.bound_scale = std::min(cm.mean, 1.0) * (1.0 - cm.variance / cm.mean);
  return out;
}

}  // namespace degreenet

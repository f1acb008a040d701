#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "degreenet/degree_laws.hpp"
#include "degreenet/errors.hpp"
#include "degreenet/specfun.hpp"
#include "oracles.hpp"
#include "test_config.hpp"

using namespace degreenet;

namespace {

std::vector<double> random_probs(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(m);
  for (auto& x : p) x = u(rng);
  return p;
}

WeightVector random_weights(std::mt19937_64& rng, std::int64_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::ArrayXd v(n);
  for (auto& x : v) x = u(rng);
  return WeightVector(v, "test");
}

// Direct evaluation of the moment formulas from the weights.
std::pair<double, double> direct_moments(const WeightVector& pi, Eigen::Index i) {
  long double m = 0.0L, v = 0.0L;
  for (Eigen::Index j = 0; j < pi.size(); ++j) {
    if (j == i) continue;
    const long double p = static_cast<long double>(pi[i]) * pi[j];
    m += p;
    v += p * (1.0L - p);
  }
  return {static_cast<double>(m), static_cast<double>(v)};
}

double pmf_sum(const DegreeLaw& l) { return l.pmf.sum(); }

}  // namespace

TEST(PoissonBinomial, SmallCases) {
  const std::vector<double> p{0.3, 0.8};
  const auto l = poisson_binomial_pmf(p);
  EXPECT_NEAR(l.pmf[0], 0.7 * 0.2, 1e-16);
  EXPECT_NEAR(l.pmf[1], 0.3 * 0.2 + 0.7 * 0.8, 1e-16);
  EXPECT_NEAR(l.pmf[2], 0.24, 1e-16);
  EXPECT_EQ(l.provenance, Provenance::exact_dp);
}

TEST(PoissonBinomial, IidReducesToBinomial) {
  const std::vector<double> p(60, 0.37);
  const auto l = poisson_binomial_pmf(p);
  for (int k = 0; k <= 60; ++k) {
    EXPECT_NEAR(l.pmf[k], static_cast<double>(oracle::binom_pmf(k, 60, 0.37L)), 1e-12);
  }
}

TEST(PoissonBinomial, MatchesEnumeration) {
  std::mt19937_64 rng(testcfg::kSeed);
  for (std::size_t m = 1; m <= 12; ++m) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto p = random_probs(rng, m);
      const auto l = poisson_binomial_pmf(p);
      const auto ref = oracle::enumerate_bernoulli_sum(p);
      for (std::size_t k = 0; k <= m; ++k) {
        ASSERT_NEAR(l.pmf[static_cast<Eigen::Index>(k)], static_cast<double>(ref[k]), testcfg::kOracleTol);
      }
    }
  }
}

TEST(ConditionalLaw, MomentsMatchFormulas) {
  std::mt19937_64 rng(testcfg::kSeed + 1);
  std::uniform_int_distribution<std::int64_t> nd(2, 200);
  for (int rep = 0; rep < 100; ++rep) {
    const auto pi = random_weights(rng, nd(rng));
    const Eigen::Index i = rep % pi.size();
    const auto l = conditional_degree_law(pi, i);
    const auto [m, v] = direct_moments(pi, i);
    EXPECT_NEAR(l.mean, m, testcfg::kMomentTol * std::max(1.0, m));
    EXPECT_NEAR(l.variance, v, testcfg::kMomentTol * std::max(1.0, v));
    EXPECT_NEAR(pmf_sum(l), 1.0, 1e-12);
    EXPECT_LE(l.variance, l.mean * (1.0 + 1e-12));
    if (m > 0.0) {
      const auto cm = conditional_moments(pi, i);
      EXPECT_NEAR(cm.mean, m, 1e-10 * std::max(1.0, m));
      EXPECT_LE(cm.disp_gap_lower, 1.0 - cm.dispersion + 1e-12);
      EXPECT_LE(1.0 - cm.dispersion, cm.disp_gap_upper + 1e-12);
    }
  }
}

TEST(ConditionalLaw, HomogeneousAndPowerLaw) {
  const double p = 0.09;
  const WeightVector h(Eigen::ArrayXd::Constant(41, std::sqrt(p)), "h");
  const auto cm = conditional_moments(h, 3);
  EXPECT_NEAR(cm.mean, 40 * p, 1e-12);
  EXPECT_NEAR(cm.dispersion, 1.0 - p, 1e-12);
  EXPECT_NEAR(cm.disp_gap_lower, p, 1e-12);
  EXPECT_NEAR(cm.disp_gap_upper, std::sqrt(p), 1e-12);

  const auto pi = materialize_power_law(PowerLawModel{0.5, 1.0}, 1000);
  const auto l = conditional_degree_law(pi, 0);
  const double env = 1.0 / 0.5 * std::pow(1000.0, 0.5);
  EXPECT_LT(std::abs(l.mean / env - 1.0), 2.0 * std::pow(1000.0, -0.5));
}

TEST(ConditionalLaw, Covariance) {
  const auto pi = materialize_power_law(PowerLawModel{0.3, 1.0}, 30);
  for (Eigen::Index j = 1; j < 30; ++j) {
    const double c = conditional_covariance(pi, 0, j);
    EXPECT_NEAR(c, pi[0] * pi[j] * (1 - pi[0] * pi[j]), 1e-16);
    EXPECT_LE(c, 0.25);
  }
}

TEST(ConditionalLaw, IsolatedNodeIsDegenerate) {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(5);
  v[2] = 0.5;
  EXPECT_THROW(conditional_moments(WeightVector(v, "z"), 2), DegenerateError);
}

TEST(MarginalMoments, Arithmetic) {
  EXPECT_NEAR(marginal_moments(0.5, 1.0 / 12.0, 101).mean, 25.0, 1e-12);
  EXPECT_NEAR(marginal_moments(0.5, 1.0 / 12.0, 14).dispersion, 1.75, 1e-12);
  EXPECT_NEAR(marginal_moments(0.3, 0.0, 50).dispersion, 1.0 - 0.09, 1e-15);
  EXPECT_THROW(marginal_moments(0.5, 0.3, 10), DomainError);
  // With two nodes the covariance is the variance of the single shared edge.
  const auto two = marginal_moments(0.5, 1.0 / 12.0, 2);
  EXPECT_NEAR(two.covariance, two.variance, 1e-15);
}

TEST(MarginalMoments, CovarianceMatchesThreeNodeExpansion) {
  // cov(d_1, d_2) for n = 3 by exhaustive integration over the three
  // weights: E d1 d2 - (E d1)^2 with p_ij = pi_i pi_j and pi ~ U(0,1).
  // E[d1 d2] = E[A12] + E[A12 A23] + E[A13 A12] + E[A13 A23]
  //          = mu^2 + 3 mu2 mu^2 (moments of uniform: mu = 1/2, mu2 = 1/3).
  const double mu = 0.5, mu2 = 1.0 / 3.0;
  const double e12 = mu * mu + 3.0 * mu2 * mu * mu;
  const double m = 2.0 * mu * mu;
  const auto mm = marginal_moments(mu, mu2 - mu * mu, 3);
  EXPECT_NEAR(mm.covariance, e12 - m * m, 1e-15);
}

TEST(MarginalQuadrature, PointMassIsBinomial) {
  const auto l = marginal_pmf_quadrature(MixingModel{PointMassModel{0.4}}, 30);
  for (int k = 0; k < 30; ++k) {
    EXPECT_NEAR(l.pmf[k], static_cast<double>(oracle::binom_pmf(k, 29, 0.16L)), 1e-14);
  }
}

TEST(MarginalQuadrature, UniformClosedForm) {
  const std::int64_t n = 300;
  const auto l = marginal_pmf_quadrature(MixingModel{SmoothDensityModel::uniform()}, n);
  EXPECT_NEAR(pmf_sum(l), 1.0, 1e-9);
  for (std::int64_t k = 0; k < n; ++k) {
    const double ref = specfun::binom_survival(k, n, 0.5) / (n * 0.5);
    EXPECT_NEAR(l.pmf[k], ref, 1e-10 * std::max(ref, 1e-3)) << k;
  }
}

TEST(MarginalQuadrature, DispersionMatchesFormula) {
  const auto p = BoundedParetoModel::make(2.0, 0.2, 0.9);
  for (std::int64_t n : {50, 200}) {
    for (const MixingModel& F : {MixingModel{SmoothDensityModel::uniform()}, MixingModel{p}}) {
      const auto l = marginal_pmf_quadrature(F, n);
      const auto mm = mixing_moments(F);
      const auto ref = marginal_moments(mm.mu, mm.sigma2, n);
      EXPECT_NEAR(l.mean, ref.mean, 1e-8 * ref.mean);
      EXPECT_NEAR(l.dispersion(), ref.dispersion, testcfg::kDispersionTol);
    }
  }
}

TEST(ParetoClosedForm, BetaZeroIsExact) {
  const auto m = BoundedParetoModel::make(0.0, 0.2, 0.7);
  const std::int64_t n = 400;
  const auto c = pareto_population_pmf(m, n);
  const auto q = marginal_pmf_quadrature(MixingModel{m}, n);
  const auto& eps = *c.column("eps_exact");
  for (std::int64_t k = 1; k < n; ++k) {
    EXPECT_EQ(eps[k], 0.0);
    if (q.pmf[k] > 1e-12) EXPECT_NEAR(c.pmf[k] / q.pmf[k], 1.0, 1e-9) << k;
  }
}

TEST(ParetoClosedForm, BetaOneHasNoGammaRatioError) {
  const auto m = BoundedParetoModel::make(1.0, 0.1, 0.8);
  const auto c = pareto_population_pmf(m, 300);
  const auto q = marginal_pmf_quadrature(MixingModel{m}, 300);
  for (std::int64_t k = 2; k < 300; ++k) {
    EXPECT_EQ((*c.column("eps_exact"))[k], 0.0);
    if (q.pmf[k] > 1e-12) EXPECT_NEAR(c.pmf[k] / q.pmf[k], 1.0, 1e-9) << k;
  }
}

TEST(ParetoClosedForm, FigureParameters) {
  const auto m = BoundedParetoModel::make(3.0, 1.0 / 3.0, 1.0);
  const std::int64_t n = 1000;
  const auto c = pareto_population_pmf(m, n);
  const auto q = marginal_pmf_quadrature(MixingModel{m}, n);
  const double mu = 0.5, nmu = n * mu, rt = std::sqrt(1000.0);
  const auto& eps = *c.column("eps_exact");
  const auto& lead = *c.column("eps_leading");
  for (std::int64_t k = 0; k < n; ++k) {
    const double dk = static_cast<double>(k);
    if (dk > 3.0 && q.pmf[k] > 1e-12) {
      EXPECT_LT(std::abs(c.pmf[k] / q.pmf[k] - 1.0), 1e-3);
      EXPECT_LT(std::abs(eps[k] - lead[k]), 2.0 * lead[k] * lead[k] + 1e-12 * 0.0 + 5.0 / (dk * dk));
    }
    if (dk > nmu * m.b + 5 * rt || dk < nmu * m.a - 5 * rt) EXPECT_LT(c.pmf[k], 1e-8) << k;
  }
  EXPECT_EQ(c.fallback_k.size(), 4u);  // k = 0..3 <= beta
  // Interior regression of log pmf on log k.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (int k = 250; k <= 400; ++k) {
    const double x = std::log(k), y = std::log(c.pmf[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, cnt += 1;
  }
  EXPECT_NEAR((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx), -3.0, 0.05);
}

TEST(SmoothRepro, ConstantDensityIsExact) {
  const auto l = smooth_repro_pmf(SmoothDensityModel::uniform(), 200);
  for (std::int64_t k = 0; k < 200; ++k) {
    EXPECT_NEAR(l.pmf[k], specfun::binom_survival(k, 200, 0.5) / 100.0, 1e-15);
  }
}

TEST(SmoothRepro, LinearDensityErrorOnlyFromLinearization) {
  const auto f = SmoothDensityModel::polynomial("lin", {2.0 / 3.0, 2.0 / 3.0});
  const std::int64_t n = 500;
  const auto a = smooth_repro_pmf(f, n);
  const auto q = marginal_pmf_quadrature(MixingModel{f}, n);
  const double nmu = n * f.mu;
  const auto& tail = *a.column("tail");
  for (std::int64_t k = 0; k < n; ++k) {
    EXPECT_LE(std::abs(nmu * (a.pmf[k] - q.pmf[k])), tail[k] / (n + 2.0) + 1e-14);
  }
}

TEST(SmoothRepro, ErrorBoundAndRate) {
  for (const auto& f : {SmoothDensityModel::polynomial("q", {0.75, 1.5, -1.5}),
                        SmoothDensityModel::polynomial("c", {4.0 / 3.0, 0.0, -2.0, 4.0 / 3.0})}) {
    double prev = 0.0;
    for (std::int64_t n : {250, 500, 1000}) {
      const auto a = smooth_repro_pmf(f, n);
      const auto q = marginal_pmf_quadrature(MixingModel{f}, n);
      const double nmu = n * f.mu;
      const auto& arg = *a.column("arg");
      const auto& tail = *a.column("tail");
      double sup = 0.0;
      for (std::int64_t k = 0; k < n; ++k) {
        if (tail[k] < 1e-300) continue;  // subnormal range carries no relative accuracy
        const double err = std::abs(nmu * q.pmf[k] - f.f(arg[k]) * tail[k]);
        EXPECT_LT(err, f.c_const() / nmu * arg[k] * tail[k]) << f.name << " " << n << " " << k;
        sup = std::max(sup, err);
      }
      if (prev > 0.0) EXPECT_NEAR(sup / prev, 0.5, 0.15) << f.name << " " << n;
      prev = sup;
    }
  }
}

TEST(Sparse, SmallGammaApproachesSmoothRepro) {
  const auto f = SmoothDensityModel::polynomial("q", {0.75, 1.5, -1.5});
  const auto s = sparse_pmf(f, ScalingMap{1e-12, 1.0, 0.0, 0.0}, 400);
  const auto r = smooth_repro_pmf(f, 400);
  EXPECT_EQ(s.provenance, Provenance::sparse_beta);
  for (std::int64_t k = 0; k < 400; ++k) EXPECT_NEAR(s.pmf[k], r.pmf[k], 1e-12);
}

TEST(Sparse, BetaAndGammaFormsAgree) {
  const auto f = SmoothDensityModel::uniform();
  const std::int64_t n = 100000;
  const ScalingMap map{0.35, 1.0, 0.0, 0.0};
  const double mun = map.mu_n(f.mu, n);
  LawOptions o;
  o.k_max = 200;
  const auto b = sparse_beta_pmf(f, mun, n, o);
  const auto g = sparse_gamma_pmf(f, mun, n, o);
  EXPECT_EQ(sparse_pmf(f, map, n, o).provenance, Provenance::sparse_gamma);
  const double dn = static_cast<double>(n);
  for (std::int64_t k = 0; k <= 200; ++k) {
    const double env = static_cast<double>(k * k) / dn + k * mun + dn * mun * mun;
    if (b.pmf[k] > 1e-14) EXPECT_LT(std::abs(g.pmf[k] / b.pmf[k] - 1.0), env) << k;
  }
}

TEST(Sparse, MeanMatchesSparseMoments) {
  const auto f = SmoothDensityModel::uniform();
  for (double gamma : {0.2, 0.3, 0.4}) {
    const std::int64_t n = 100000;
    const ScalingMap map{gamma, 2.0, 0.0, 0.0};
    const auto l = sparse_pmf(f, map, n);
    const double dn = static_cast<double>(n);
    const double lead = std::pow(dn, 1.0 - 2.0 * gamma) * 2.0 * f.mu * f.mu;
    // O(n^{-2 gamma}) term plus the approximation's own n mu_n^2 relative defect.
    const double mun = map.mu_n(f.mu, n);
    const double defect = std::max(0.02, dn * mun * mun);
    EXPECT_NEAR(l.mean, lead, defect * lead + std::pow(dn, -2 * gamma) * 10) << gamma;
  }
}

TEST(Sparse, RegimeErrors) {
  const auto f = SmoothDensityModel::uniform();
  EXPECT_THROW(sparse_pmf(f, ScalingMap{0.6, 1.0, 0.0, 0.0}, 1000), RegimeError);
  EXPECT_THROW(sparse_pmf(f, ScalingMap{0.0, 1.0, 0.0, 0.0}, 1000), RegimeError);
  EXPECT_THROW(sparse_pmf(f, ScalingMap{0.3, 1.0, 0.1, 1.0}, 1000), RegimeError);
  EXPECT_EQ(sparse_pmf(f, ScalingMap{0.25, 1.0, 0.0, 0.0}, 1000).provenance, Provenance::sparse_beta);
}

TEST(ExtremeSparse, UniformClosedForm) {
  const auto f = SmoothDensityModel::uniform();
  const auto l = extreme_sparse_pmf(f, 2.0, 60);
  EXPECT_NEAR(l.pmf[0], -std::expm1(-1.0), 1e-10);
  for (int k = 0; k < 20; ++k) {
    EXPECT_NEAR(l.pmf[k], specfun::reg_inc_gamma_lower(k + 1, 1.0), 1e-12);
  }
  const auto z = extreme_sparse_pmf(f, 12.0, 120);
  EXPECT_NEAR(z.mean, 3.0, 1e-9);
  EXPECT_NEAR(z.dispersion(), 2.0, 1e-9);
  EXPECT_THROW(extreme_sparse_pmf(f, 12.0, 5), DomainError);
}

TEST(ExtremeSparse, SmallZetaExpansion) {
  const auto l = extreme_sparse_pmf(SmoothDensityModel::uniform(), 0.1, 40);
  const double first = 1.0 - 0.025;
  EXPECT_LT(std::abs(l.pmf[0] - first), 0.01);
  // Next term of the expansion: mu^2 zeta^2 E(t^2) / 2 with t uniform.
  EXPECT_NEAR((l.pmf[0] - first) / 0.01, 0.25 / 6.0, 0.05 * 0.25 / 6.0);
}

TEST(ExtremeSparse, ApproximationWithinBound) {
  const auto f = SmoothDensityModel::polynomial("q", {0.75, 1.5, -1.5});
  for (double zeta : {4.0, 16.0, 64.0}) {
    const auto l = extreme_sparse_pmf(f, zeta, 400);
    const auto& rel = *l.column("rel_error");
    const auto& bound = *l.column("bound");
    for (Eigen::Index k = 0; k < l.pmf.size(); ++k) {
      if (l.pmf[k] > 1e-12) EXPECT_LE(rel[k], bound[k]) << zeta << " " << k;
    }
  }
}

TEST(TotalVariation, DecreasesAlongPowerLawGrid) {
  for (double gamma : {0.3, 0.5, 0.7}) {
    for (bool middle : {false, true}) {
      double prev = 1.0;
      for (std::int64_t n : {100, 1000, 10000}) {
        const auto pi = materialize_power_law(PowerLawModel{gamma, 1.0}, n);
        const auto r = tv_distance_to_poisson(pi, middle ? n / 2 - 1 : 0);
        EXPECT_LT(r.tv, prev) << gamma << " " << n;
        EXPECT_LT(r.tv / r.bound_scale, 2.0);
        prev = r.tv;
      }
    }
  }
}

TEST(TotalVariation, RareEventsLimit) {
  double prev = 1.0;
  for (double s : {0.3, 0.1, 0.03, 0.01}) {
    const auto pi = materialize_power_law(PowerLawModel{0.5, s}, 200);
    const double tv = tv_distance_to_poisson(pi, 3).tv;
    EXPECT_LT(tv, prev);
    prev = tv;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(TotalVariation, PoissonReferenceTruncation) {
  const auto p = poisson_pmf_truncated(7.5);
  EXPECT_GT(p.sum(), 1.0 - 1e-14);
  EXPECT_LT(p.sum(), 1.0 + 1e-14);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "degreenet/errors.hpp"
#include "degreenet/specfun.hpp"
#include "degreenet/stats.hpp"
#include "degreenet/weights.hpp"
#include "test_config.hpp"

using namespace degreenet;

TEST(WeightVector, Validation) {
  EXPECT_THROW(WeightVector(Eigen::ArrayXd::Constant(1, 0.5), "t"), ModelError);
  Eigen::ArrayXd bad(3);
  bad << 0.2, 1.2, 0.1;
  EXPECT_THROW(WeightVector(bad, "t"), ModelError);
  Eigen::ArrayXd ok(3);
  ok << 0.2, 1.0, 0.0;
  const WeightVector w(ok, "t");
  EXPECT_DOUBLE_EQ(w.l1(), 1.2);
  EXPECT_DOUBLE_EQ(w.l2_squared(), 1.04);
  const Eigen::ArrayXd s = w.sorted_descending();
  EXPECT_EQ(s[0], 1.0);
  EXPECT_EQ(s[2], 0.0);
  EXPECT_EQ(w[0], 0.2);  // generation order preserved
}

TEST(PowerLaw, DirectFormula) {
  const auto w = materialize_power_law(PowerLawModel{0.5, 1.0}, 4);
  EXPECT_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(w[2], 1.0 / std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(w[3], 0.5);
}

TEST(PowerLaw, NormMatchesPowerSum) {
  const auto w = materialize_power_law(PowerLawModel{0.3, 1.0}, 1000);
  EXPECT_NEAR(w.l1(), specfun::power_sum(1000, 0.3).exact, 1e-11);
  for (Eigen::Index i = 1; i < w.size(); ++i) EXPECT_LE(w[i], w[i - 1]);
}

TEST(PowerLaw, RejectsInvalidParameters) {
  EXPECT_THROW(materialize_power_law(PowerLawModel{1.2, 1.0}, 10), ModelError);
  EXPECT_THROW(materialize_power_law(PowerLawModel{0.5, 1.5}, 10), ModelError);
}

TEST(Envelope, ConstantEnvelopeIsBitIdentical) {
  EnvelopeModel e{PowerLawModel{0.4, 0.9}, {0.0, 1.0}, {1.0, 1.0}, 1.0, 1.0};
  const auto a = materialize_power_law(e, 500);
  const auto b = materialize_power_law(PowerLawModel{0.4, 0.9}, 500);
  for (Eigen::Index i = 0; i < 500; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Envelope, InterpolatesAndChecksBounds) {
  EnvelopeModel e{PowerLawModel{0.4, 0.5}, {0.0, 0.5, 1.0}, {1.0, 1.5, 1.0}, 1.0, 1.5};
  EXPECT_DOUBLE_EQ(e.xi(0.25), 1.25);
  EXPECT_THROW(e.xi(1.5), DomainError);
  EXPECT_THROW(e.xi(0.0), DomainError);
  EnvelopeModel over{PowerLawModel{0.4, 0.9}, {0.0, 1.0}, {2.0, 2.0}, 2.0, 2.0};
  EXPECT_THROW(materialize_power_law(over, 10), ModelError);
}

TEST(BoundedPareto, NormalizerAndMoments) {
  const auto m = BoundedParetoModel::make(3.0, 1.0 / 3.0, 1.0);
  EXPECT_NEAR(m.c, 0.25, 1e-12);
  EXPECT_NEAR(m.raw_moment(1), 0.5, 1e-14);
  EXPECT_NEAR(m.cdf(m.inverse_cdf(0.37)), 0.37, 1e-14);
  const auto l = BoundedParetoModel::make(1.0, 0.1, 0.9);
  EXPECT_NEAR(l.c, 1.0 / std::log(9.0), 1e-14);
  EXPECT_NEAR(l.inverse_cdf(0.5), 0.3, 1e-14);
  EXPECT_THROW(BoundedParetoModel::make(1.0, 0.0, 1.0), ModelError);
  EXPECT_THROW(BoundedParetoModel::make(0.5, 0.6, 0.4), ModelError);
}

namespace {
void expect_mean(const WeightVector& w, double mu, double sd) {
  const double n = static_cast<double>(w.size());
  EXPECT_NEAR(w.values().mean(), mu, 3.0 * sd / std::sqrt(n));
}
}  // namespace

TEST(BoundedPareto, SampleMeans) {
  const auto u = BoundedParetoModel::make(0.0, 0.2, 0.6);
  const auto wu = sample_bounded_pareto(u, 20000, testcfg::kSeed);
  expect_mean(wu, 0.4, 0.4 / std::sqrt(12.0));
  EXPECT_GE(wu.values().minCoeff(), 0.2);
  EXPECT_LT(wu.values().maxCoeff(), 0.6);
  const auto p = BoundedParetoModel::make(3.0, 1.0 / 3.0, 1.0);
  const auto wp = sample_bounded_pareto(p, 20000, testcfg::kSeed + 1);
  expect_mean(wp, 0.5, std::sqrt(p.raw_moment(2) - 0.25));
}

TEST(BoundedPareto, LogBranchPassesKs) {
  const auto m = BoundedParetoModel::make(1.0, 0.05, 0.8);
  const auto w = sample_bounded_pareto(m, 5000, testcfg::kSeed);
  std::vector<double> xs(w.values().data(), w.values().data() + w.size());
  const auto ks = stats::ks_one_sample(xs, [&](double x) { return m.cdf(x); });
  EXPECT_GT(ks.p_value, testcfg::kAlpha);
}

TEST(BoundedPareto, OrderStatisticsApproachQuantiles) {
  const auto m = BoundedParetoModel::make(3.0, 1.0 / 3.0, 1.0);
  double prev_gap = 1.0;
  for (std::int64_t n : {20, 200}) {
    const auto i = static_cast<Eigen::Index>(n / 4);  // fixed i/n = 1/4
    double acc = 0.0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
      Eigen::ArrayXd v = sample_bounded_pareto(m, n, testcfg::kSeed + r).values();
      std::sort(v.data(), v.data() + v.size());
      acc += v[i - 1];
    }
    const double gap = std::abs(acc / reps - m.inverse_cdf(0.25));
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
}

TEST(SmoothDensity, PolynomialMoments) {
  const auto f = SmoothDensityModel::polynomial("q", {0.75, 1.5, -1.5});
  EXPECT_NEAR(f.mu, 0.5, 1e-12);
  EXPECT_NEAR(f.c_const(), 1.5, 1e-9);
  const auto lin = SmoothDensityModel::polynomial("l", {2.0 / 3.0, 2.0 / 3.0});
  EXPECT_NEAR(lin.mu, 5.0 / 9.0, 1e-12);
  EXPECT_EQ(lin.f2_sup, 0.0);
  EXPECT_THROW(SmoothDensityModel::polynomial("bad", {0.5, 0.5}), ModelError);
  const auto u = SmoothDensityModel::uniform();
  EXPECT_DOUBLE_EQ(u.sigma2, 1.0 / 12.0);
}

TEST(SmoothDensity, RejectionSamplerMean) {
  const auto f = SmoothDensityModel::polynomial("c", {4.0 / 3.0, 0.0, -2.0, 4.0 / 3.0});
  const auto w = sample_smooth(f, 20000, testcfg::kSeed);
  expect_mean(w, f.mu, std::sqrt(f.sigma2));
}

TEST(Sampling, SameSeedSameVector) {
  const auto f = SmoothDensityModel::uniform();
  const auto a = generate_weights(f, 1000, 42);
  const auto b = generate_weights(f, 1000, 42);
  const auto c = generate_weights(f, 1000, 43);
  EXPECT_TRUE((a.values() == b.values()).all());
  EXPECT_FALSE((a.values() == c.values()).all());
}

TEST(Scaling, IdentityAndHomogeneous) {
  const auto pi = materialize_power_law(PowerLawModel{0.5, 1.0}, 50);
  const auto same = apply_scaling(pi, ScalingMap{}, 50);
  EXPECT_TRUE((same.values() == pi.values()).all());
  const std::int64_t n = 400;
  const double p = 0.09, gp = 0.3;
  ScalingMap h{0.0, 0.0, gp, p * std::pow(static_cast<double>(n), 2 * gp)};
  const auto flat = apply_scaling(materialize_power_law(PowerLawModel{0.5, 1.0}, n), h, n);
  for (Eigen::Index i = 0; i < n; ++i) EXPECT_NEAR(flat[i], 0.3, 1e-15);
}

TEST(Scaling, ExtremeSparseNeverClamps) {
  const std::int64_t n = 1000000;
  const auto u = generate_weights(SmoothDensityModel::uniform(), n, 7);
  const auto s = apply_scaling(u, ScalingMap{0.5, 4.0, 0.0, 0.0}, n);
  EXPECT_LE(s.values().maxCoeff(), 2e-3);
  EXPECT_NEAR(s.values().maxCoeff() / u.values().maxCoeff(), 2e-3, 1e-15);
}

TEST(Scaling, ClampAppliedLast) {
  const auto pi = materialize_power_law(PowerLawModel{0.2, 1.0}, 100);
  const auto s = apply_scaling(pi, ScalingMap{0.0, 2.25, 0.0, 0.0}, 100);
  for (Eigen::Index i = 0; i < 100; ++i) EXPECT_EQ(s[i], std::min(1.5 * pi[i], 1.0));
  EXPECT_THROW(apply_scaling(pi, ScalingMap{-1.0, 1.0, 0.0, 0.0}, 100), ModelError);
}

TEST(Mixing, MomentsMatchDensity) {
  const auto p = BoundedParetoModel::make(2.5, 0.1, 0.7);
  const auto mm = mixing_moments(MixingModel{p});
  EXPECT_NEAR(mm.mu, p.raw_moment(1), 1e-15);
  EXPECT_NEAR(mm.sigma2, p.raw_moment(2) - mm.mu * mm.mu, 1e-15);
  EXPECT_FALSE(as_mixing(WeightModel{PowerLawModel{}}).has_value());
  EXPECT_TRUE(is_random(WeightModel{p}));
  EXPECT_FALSE(is_random(WeightModel{PointMassModel{0.3}}));
}

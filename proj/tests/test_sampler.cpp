#include <algorithm>
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <set>
#include <vector>

#include "degreenet/degree_laws.hpp"
#include "degreenet/errors.hpp"
#include "degreenet/sampler.hpp"
#include "degreenet/stats.hpp"
#include "test_config.hpp"

using namespace degreenet;

namespace {

WeightVector constant_weights(std::int64_t n, double v) {
  return WeightVector(Eigen::ArrayXd::Constant(n, v), "const");
}

void check_structure(const GraphSample& g, std::size_t n) {
  std::uint64_t sum = 0;
  for (auto d : g.degrees) {
    ASSERT_LT(d, n);
    sum += d;
  }
  ASSERT_EQ(sum, 2 * g.edge_count);
  if (g.edges) {
    ASSERT_EQ(g.edges->size(), g.edge_count);
    std::set<Edge> seen;
    std::vector<std::uint32_t> tally(n, 0);
    for (const auto& e : *g.edges) {
      ASSERT_LT(e.first, e.second);
      ASSERT_TRUE(seen.insert(e).second);
      ++tally[e.first];
      ++tally[e.second];
    }
    ASSERT_EQ(tally, g.degrees);
  }
}

std::vector<std::uint64_t> node_histogram(SamplerKind kind, const WeightVector& pi, int reps,
                                          std::uint64_t seed, std::size_t node) {
  std::vector<std::uint64_t> h(static_cast<std::size_t>(pi.size()), 0);
  for (int r = 0; r < reps; ++r) ++h[sample(kind, pi, seed, r).degrees[node]];
  return h;
}

}  // namespace

TEST(Sampler, CompleteGraphOnTwoNodes) {
  const auto pi = constant_weights(2, 1.0);
  for (auto kind : {SamplerKind::dense, SamplerKind::sparse}) {
    for (int r = 0; r < 20; ++r) {
      const auto g = sample(kind, pi, 1, r);
      EXPECT_EQ(g.degrees, (std::vector<std::uint32_t>{1, 1}));
    }
  }
}

TEST(Sampler, EmptyWeightsGiveNoEdges) {
  const auto pi = constant_weights(500, 0.0);
  EXPECT_EQ(sample_graph(pi, 3, 0).edge_count, 0u);
  EXPECT_EQ(sample_graph_sparse(pi, 3, 0).edge_count, 0u);
}

TEST(Sampler, HandshakeAndSimpleGraph) {
  const auto pi = materialize_power_law(PowerLawModel{0.5, 1.0}, 300);
  SampleOptions o;
  o.store_edges = true;
  for (int r = 0; r < 20; ++r) {
    check_structure(sample_graph(pi, testcfg::kSeed, r, o), 300);
    check_structure(sample_graph_sparse(pi, testcfg::kSeed, r, o), 300);
  }
}

TEST(Sampler, EdgeCapEnforced) {
  const auto pi = constant_weights(1000, 0.9);
  SampleOptions o;
  o.store_edges = true;
  o.edge_cap = 1000;
  EXPECT_THROW(sample_graph_sparse(pi, 1, 0, o), CapacityError);
  o.store_edges = false;
  EXPECT_NO_THROW(sample_graph_sparse(pi, 1, 0, o));
}

TEST(Sampler, SameSeedSameGraph) {
  const auto pi = materialize_power_law(PowerLawModel{0.4, 0.8}, 2000);
  for (auto kind : {SamplerKind::dense, SamplerKind::sparse}) {
    const auto a = sample(kind, pi, 99, 5);
    const auto b = sample(kind, pi, 99, 5);
    const auto c = sample(kind, pi, 99, 6);
    EXPECT_EQ(a.degrees, b.degrees);
    EXPECT_NE(a.degrees, c.degrees);
  }
}

TEST(Sampler, ErdosRenyiMeanDegree) {
  const double p = 0.05;
  const auto pi = constant_weights(200, std::sqrt(p));
  const double mean = 199 * p, sd = std::sqrt(199 * p * (1 - p));
  for (auto [kind, reps] : {std::pair{SamplerKind::dense, 20000}, std::pair{SamplerKind::sparse, 100000}}) {
    stats::Running acc;
    for (int r = 0; r < reps; ++r) acc.add(sample(kind, pi, testcfg::kSeed, r).degrees[7]);
    EXPECT_NEAR(acc.result().mean, mean, 3 * sd / std::sqrt(reps));
  }
}

TEST(Sampler, PowerLawHubDegreeAndDegreeSum) {
  const auto pi = materialize_power_law(PowerLawModel{0.5, 1.0}, 1000);
  const auto cm = conditional_moments(pi, 0);
  const double total = pi.l1() * pi.l1() - pi.l2_squared();
  stats::Running hub, sum;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    const auto g = sample_graph_sparse(pi, testcfg::kSeed, r);
    hub.add(g.degrees[0]);
    sum.add(2.0 * static_cast<double>(g.edge_count));
  }
  EXPECT_NEAR(hub.result().mean, cm.mean, 3 * std::sqrt(cm.variance / reps));
  EXPECT_NEAR(sum.result().mean, total, 3 * std::sqrt(sum.result().variance / reps));
}

TEST(Sampler, DenseAndSparseAgree) {
  const auto pi = materialize_power_law(PowerLawModel{0.5, 1.0}, 100);
  const int reps = 100000;
  for (std::size_t node : {0u, 50u}) {
    const auto a = node_histogram(SamplerKind::dense, pi, reps, testcfg::kSeed, node);
    const auto b = node_histogram(SamplerKind::sparse, pi, reps, testcfg::kSeed + 1, node);
    const auto t = stats::chi_square_two_sample(a, b);
    EXPECT_GT(t.p_value, testcfg::kAlpha) << node;
    const auto law = conditional_degree_law(pi, static_cast<Eigen::Index>(node));
    std::vector<double> probs(law.pmf.data(), law.pmf.data() + law.pmf.size());
    EXPECT_GT(stats::chi_square_gof(b, probs).p_value, testcfg::kAlpha) << node;
  }
}

TEST(Population, PointMassMatchesConditionalLaw) {
  PopulationSpec spec{PointMassModel{0.3}, std::nullopt, 150, 20000, testcfg::kSeed};
  std::vector<std::uint64_t> h(150, 0);
  sample_population(spec, [&](const GraphSample& g, const WeightVector&) { ++h[g.degrees[0]]; }, 1);
  const auto law = conditional_degree_law(constant_weights(150, 0.3), 0);
  std::vector<double> probs(law.pmf.data(), law.pmf.data() + law.pmf.size());
  EXPECT_GT(stats::chi_square_gof(h, probs).p_value, testcfg::kAlpha);
}

TEST(Population, SingleReplicateIsPlainSample) {
  const PowerLawModel m{0.5, 1.0};
  PopulationSpec spec{m, std::nullopt, 400, 1, 77, SamplerKind::dense};
  std::vector<std::uint32_t> got;
  sample_population(spec, [&](const GraphSample& g, const WeightVector&) { got = g.degrees; }, 1);
  EXPECT_EQ(got, sample_graph(materialize_power_law(m, 400), 77, 0).degrees);
}

TEST(Population, ThreadCountDoesNotChangeResults) {
  PopulationSpec spec{BoundedParetoModel::make(3.0, 1.0 / 3.0, 1.0), std::nullopt, 300, 24, 5};
  auto collect = [&](int threads) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint64_t> ids;
    sample_population(
        spec,
        [&](const GraphSample& g, const WeightVector&) {
          out.push_back(g.degrees);
          ids.push_back(g.replicate_id);
        },
        threads);
    for (std::size_t r = 0; r < ids.size(); ++r) EXPECT_EQ(ids[r], r);
    return out;
  };
  EXPECT_EQ(collect(1), collect(4));
  EXPECT_EQ(collect(1), collect(3));
}

TEST(Population, ScalingAppliedPerReplicate) {
  const std::int64_t n = 20000;
  PopulationSpec spec{SmoothDensityModel::uniform(), ScalingMap{0.5, 12.0, 0.0, 0.0}, n, 5, 11};
  stats::Running acc;
  sample_population(
      spec,
      [&](const GraphSample& g, const WeightVector& pi) {
        EXPECT_LE(pi.values().maxCoeff(), std::sqrt(12.0 / n) + 1e-15);
        for (auto d : g.degrees) acc.add(d);
      },
      1);
  EXPECT_NEAR(acc.result().mean, 3.0, 0.1);
}

TEST(SparseSampler, RuntimeScalesNearLinearly) {
  // Best of several runs: the minimum is the least noisy estimate of cost.
  auto time_at = [](std::int64_t n, int reps) {
    const auto pi = apply_scaling(generate_weights(SmoothDensityModel::uniform(), n, 1),
                                  ScalingMap{0.5, 4.0, 0.0, 0.0}, n);
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto g = sample_graph_sparse(pi, 1, static_cast<std::uint64_t>(r));
      const auto t1 = std::chrono::steady_clock::now();
      EXPECT_GT(g.edge_count, 0u);
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
  };
  const double small = time_at(100000, 9);
  const double large = time_at(1000000, 5);
  EXPECT_LT(large / small, 15.0);
}

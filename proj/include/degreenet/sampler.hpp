#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "degreenet/weights.hpp"

namespace degreenet {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// One realized network. Edges, when stored, satisfy first < second.
struct GraphSample {
  std::vector<std::uint32_t> degrees;
  std::uint64_t edge_count = 0;
  std::optional<std::vector<Edge>> edges;
  std::uint64_t seed = 0;
  std::uint64_t replicate_id = 0;
};

struct SampleOptions {
  bool store_edges = false;
  /// Largest expected edge count for which an edge list may be stored.
  double edge_cap = 5e7;
};

enum class SamplerKind { dense, sparse };

/// (||pi||_1^2 - ||pi||_2^2) / 2
double expected_edges(const WeightVector& pi);

/// Independent Bernoulli(pi_i pi_j) trial for every pair i < j. The stream is
/// seeded from (seed, replicate_id) only.
GraphSample sample_graph(const WeightVector& pi, std::uint64_t seed, std::uint64_t replicate_id,
                         const SampleOptions& opts = {});

/// Same law as sample_graph in expected O(n log n + E) time: weights sorted
/// descending, geometric skips under the bound pi_u pi_v for the current
/// column, then thinning by the ratio of the true to the bounding probability.
GraphSample sample_graph_sparse(const WeightVector& pi, std::uint64_t seed,
                                 std::uint64_t replicate_id, const SampleOptions& opts = {});

GraphSample sample(SamplerKind kind, const WeightVector& pi, std::uint64_t seed,
                   std::uint64_t replicate_id, const SampleOptions& opts = {});

struct PopulationSpec {
  WeightModel model;
  std::optional<ScalingMap> scaling;
  std::int64_t n = 0;
  std::uint64_t replicates = 1;
  std::uint64_t master_seed = 0;
  SamplerKind kind = SamplerKind::sparse;
  SampleOptions sample_opts;
};

using PopulationVisitor = std::function<void(const GraphSample&, const WeightVector&)>;

/// For each replicate r: draw pi from the model (seeded by hash(master_seed, r))
/// when the model is random, apply the scaling map, sample one graph. The
/// visitor is called in replicate order regardless of `threads`.
void sample_population(const PopulationSpec& spec, const PopulationVisitor& visit, int threads);

/// Weight vector for replicate r of a population (fixed models ignore r).
WeightVector population_weights(const PopulationSpec& spec, std::uint64_t replicate_id);

}  // namespace degreenet

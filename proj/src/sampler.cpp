#include "degreenet/sampler.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "degreenet/errors.hpp"
#include "degreenet/parallel.hpp"
#include "degreenet/rng.hpp"

namespace degreenet {
namespace {

void check_capacity(const WeightVector& pi, const SampleOptions& opts) {
  if (pi.size() > static_cast<Eigen::Index>(UINT32_MAX)) {
    throw CapacityError("sampler: n exceeds 32-bit node ids");
  }
  if (opts.store_edges && expected_edges(pi) > opts.edge_cap) {
    throw CapacityError("sampler: expected edge count " + std::to_string(expected_edges(pi)) +
                        " exceeds the edge-list cap " + std::to_string(opts.edge_cap));
  }
}

GraphSample empty_sample(const WeightVector& pi, std::uint64_t seed, std::uint64_t rep,
                         const SampleOptions& opts) {
  GraphSample g;
  g.degrees.assign(static_cast<std::size_t>(pi.size()), 0);
  g.seed = seed;
  g.replicate_id = rep;
  if (opts.store_edges) {
    g.edges.emplace();
    g.edges->reserve(static_cast<std::size_t>(expected_edges(pi) * 1.1) + 16);
  }
  return g;
}

// Stable descending order of nonnegative weights: LSD radix sort on the
// complemented IEEE bit pattern (monotone for x >= 0), 16-bit digits, all
// digit histograms gathered in one read. Linear time and a small footprint
// keep the sparse sampler O(n + E) once n outgrows the cache.
struct Ranked {
  std::vector<std::uint64_t> key;  // ~bits(weight), ascending
  std::vector<std::uint32_t> index;
  double weight(std::size_t i) const { return std::bit_cast<double>(~key[i]); }
};

Ranked descending_order(const Eigen::ArrayXd& values) {
  const auto n = static_cast<std::size_t>(values.size());
  constexpr int kBits = 16;
  constexpr std::size_t kBuckets = std::size_t{1} << kBits;
  Ranked r{std::vector<std::uint64_t>(n), std::vector<std::uint32_t>(n)};
  // The digit tables cost more than a comparison sort on small inputs.
  if (n < kBuckets / 4) {
    for (std::size_t i = 0; i < n; ++i) r.index[i] = static_cast<std::uint32_t>(i);
    std::stable_sort(r.index.begin(), r.index.end(), [&](std::uint32_t a, std::uint32_t b) {
      return values[a] > values[b];
    });
    for (std::size_t i = 0; i < n; ++i)
      r.key[i] = ~std::bit_cast<std::uint64_t>(values[r.index[i]]);
    return r;
  }
  std::vector<std::uint32_t> count(4 * kBuckets, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t k = ~std::bit_cast<std::uint64_t>(values[static_cast<Eigen::Index>(i)]);
    r.key[i] = k;
    r.index[i] = static_cast<std::uint32_t>(i);
    for (int d = 0; d < 4; ++d) ++count[d * kBuckets + ((k >> (d * kBits)) & (kBuckets - 1))];
  }
  std::vector<std::uint64_t> key_tmp(n);
  std::vector<std::uint32_t> index_tmp(n);
  for (int d = 0; d < 4; ++d) {
    std::uint32_t* c = count.data() + d * kBuckets;
    if (std::any_of(c, c + kBuckets, [n](std::uint32_t x) { return x == n; })) continue;
    std::uint32_t total = 0;
    for (std::size_t j = 0; j < kBuckets; ++j) total += std::exchange(c[j], total);
    const int shift = d * kBits;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t pos = c[(r.key[i] >> shift) & (kBuckets - 1)]++;
      key_tmp[pos] = r.key[i];
      index_tmp[pos] = r.index[i];
    }
    r.key.swap(key_tmp);
    r.index.swap(index_tmp);
  }
  return r;
}

inline void add_edge(GraphSample& g, std::uint32_t u, std::uint32_t v) {
  ++g.degrees[u];
  ++g.degrees[v];
  ++g.edge_count;
  if (g.edges) g.edges->emplace_back(std::min(u, v), std::max(u, v));
}

}  // namespace

double expected_edges(const WeightVector& pi) {
  const double l1 = pi.l1();
  return 0.5 * (l1 * l1 - pi.l2_squared());
}

GraphSample sample_graph(const WeightVector& pi, std::uint64_t seed, std::uint64_t replicate_id,
                         const SampleOptions& opts) {
  check_capacity(pi, opts);
  GraphSample g = empty_sample(pi, seed, replicate_id, opts);
  rng::Engine eng(rng::stream_seed(seed, replicate_id, rng::Stream::graph));
  const auto n = static_cast<std::uint32_t>(pi.size());
  const double* w = pi.values().data();
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng::bernoulli(eng, w[i] * w[j])) add_edge(g, i, j);
    }
  }
  return g;
}

GraphSample sample_graph_sparse(const WeightVector& pi, std::uint64_t seed,
                                 std::uint64_t replicate_id, const SampleOptions& opts) {
  check_capacity(pi, opts);
  GraphSample g = empty_sample(pi, seed, replicate_id, opts);
  rng::Engine eng(rng::stream_seed(seed, replicate_id, rng::Stream::graph));
  const auto n = static_cast<std::uint32_t>(pi.size());
  const Ranked order = descending_order(pi.values());
  // Weight and degree tally share a slot so each proposal touches one line.
  struct Slot {
    double w;
    std::uint32_t deg;
  };
  std::vector<Slot> row(n);
  for (std::uint32_t i = 0; i < n; ++i) row[i] = {order.weight(i), 0};

  // Rows are independent, so several are walked in lockstep: each lane draws
  // its next skip and prefetches the target slot, and resolves it on its next
  // turn. The interleaving is fixed, so the stream stays deterministic.
  struct Lane {
    std::uint32_t u = 0;
    std::uint64_t v = 0;
    double wu = 0.0;
    double p = 0.0;
    bool live = false;
  };
  constexpr int kLanes = 8;
  std::array<Lane, kLanes> lanes{};
  std::uint32_t next_row = 0;

  // Move the lane to its next proposal; false when the row is exhausted.
  auto advance = [&](Lane& L) {
    if (!(L.v < n && L.p > 0.0)) return false;
    if (L.p < 1.0) {
      const std::uint64_t skip = rng::geometric(eng, L.p);
      if (skip >= n - L.v) return false;
      L.v += skip;
    }
    __builtin_prefetch(&row[L.v]);
    return true;
  };
  auto start = [&](Lane& L) {
    while (next_row + 1 < n && row[next_row].w > 0.0) {
      L.u = next_row++;
      L.wu = row[L.u].w;
      L.v = L.u + 1;
      L.p = std::min(L.wu * row[L.v].w, 1.0);
      if (advance(L)) return true;
    }
    return false;
  };
  int live = 0;
  for (auto& L : lanes) live += (L.live = start(L));
  while (live > 0) {
    for (auto& L : lanes) {
      if (!L.live) continue;
      Slot& sv = row[L.v];
      const double q = std::min(L.wu * sv.w, 1.0);
      if (rng::uniform01(eng) < q / L.p) {
        ++row[L.u].deg;
        ++sv.deg;
        ++g.edge_count;
        if (g.edges) {
          const std::uint32_t a = order.index[L.u], b = order.index[L.v];
          g.edges->emplace_back(std::min(a, b), std::max(a, b));
        }
      }
      L.p = q;
      ++L.v;
      if (!advance(L) && !start(L)) {
        L.live = false;
        --live;
      }
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) g.degrees[order.index[i]] = row[i].deg;
  if (g.edges) std::sort(g.edges->begin(), g.edges->end());
  return g;
}

GraphSample sample(SamplerKind kind, const WeightVector& pi, std::uint64_t seed,
                   std::uint64_t replicate_id, const SampleOptions& opts) {
  return kind == SamplerKind::dense ? sample_graph(pi, seed, replicate_id, opts)
                                    : sample_graph_sparse(pi, seed, replicate_id, opts);
}

WeightVector population_weights(const PopulationSpec& spec, std::uint64_t replicate_id) {
  WeightVector w = generate_weights(
      spec.model, spec.n, rng::stream_seed(spec.master_seed, replicate_id, rng::Stream::weights));
  if (spec.scaling) w = apply_scaling(w, *spec.scaling, spec.n);
  return w;
}

void sample_population(const PopulationSpec& spec, const PopulationVisitor& visit, int threads) {
  if (spec.replicates < 1) throw DomainError("sample_population: need replicates >= 1");
  struct Item {
    std::optional<WeightVector> weights;
    GraphSample graph;
  };
  std::optional<WeightVector> fixed;
  if (!is_random(spec.model)) fixed.emplace(population_weights(spec, 0));

  std::function<Item(std::uint64_t)> produce = [&](std::uint64_t r) {
    Item it;
    if (!fixed) it.weights.emplace(population_weights(spec, r));
    const WeightVector& w = fixed ? *fixed : *it.weights;
    it.graph = sample(spec.kind, w, spec.master_seed, r, spec.sample_opts);
    return it;
  };
  std::function<void(std::uint64_t, Item&&)> consume = [&](std::uint64_t, Item&& it) {
    visit(it.graph, fixed ? *fixed : *it.weights);
  };
  ordered_parallel<Item>(spec.replicates, threads, produce, consume);
}

}  // namespace degreenet

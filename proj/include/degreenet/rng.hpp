#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace degreenet::rng {

using Engine = std::mt19937_64;

enum class Stream : std::uint64_t { weights = 0x57, graph = 0x47 };

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed for one replicate: depends only on its arguments, so
/// replicates can run in any order on any thread.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replicate,
                                    Stream tag) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ replicate);
  return splitmix64(h ^ static_cast<std::uint64_t>(tag));
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& e) {
  return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
inline double uniform_open0(Engine& e) { return 1.0 - uniform01(e); }

inline bool bernoulli(Engine& e, double p) { return uniform01(e) < p; }

/// Failures before the first success of Bernoulli(p) trials, 0 < p <= 1.
inline std::uint64_t geometric(Engine& e, double p) {
  if (p >= 1.0) return 0;
  const double g = std::floor(std::log(uniform_open0(e)) / std::log1p(-p));
  if (!(g < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(g);
}

}  // namespace degreenet::rng

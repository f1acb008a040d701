#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace degreenet {

/// Worker count from DEGREENET_THREADS, else hardware concurrency (>= 1).
int default_threads();

/// Runs produce(i) for i in [0, count) on up to `threads` workers and hands
/// each result to consume() strictly in index order, so the consumer sees the
/// same sequence whatever the thread count. Results are buffered one batch
/// at a time to bound memory.
template <class T>
void ordered_parallel(std::uint64_t count, int threads,
                      const std::function<T(std::uint64_t)>& produce,
                      const std::function<void(std::uint64_t, T&&)>& consume) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (std::uint64_t i = 0; i < count; ++i) consume(i, produce(i));
    return;
  }
  const std::uint64_t batch = static_cast<std::uint64_t>(threads) * 4;
  std::vector<std::optional<T>> slots(batch);
  for (std::uint64_t start = 0; start < count; start += batch) {
    const std::uint64_t stop = std::min(count, start + batch);
    std::atomic<std::uint64_t> next{start};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= stop) return;
        try {
          slots[i - start].emplace(produce(i));
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    const int nworkers = static_cast<int>(std::min<std::uint64_t>(threads, stop - start));
    for (int t = 0; t < nworkers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    for (std::uint64_t i = start; i < stop; ++i) {
      consume(i, std::move(*slots[i - start]));
      slots[i - start].reset();
    }
  }
}

}  // namespace degreenet

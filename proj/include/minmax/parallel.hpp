#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "minmax/random.hpp"

namespace mmh {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Callers store
/// results by index, so output never depends on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Monte Carlo sample plan: `samples` draws split into fixed-size chunks, chunk
/// k drawing from stream (stream_base + k). The split depends only on the
/// sample count, never on the worker count.
struct SamplePlan {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  unsigned threads = 1;
  static constexpr std::uint64_t kChunk = 1u << 15;

  std::size_t chunks() const { return static_cast<std::size_t>((samples + kChunk - 1) / kChunk); }
  std::uint64_t chunk_size(std::size_t k) const {
    const std::uint64_t start = static_cast<std::uint64_t>(k) * kChunk;
    return std::min<std::uint64_t>(kChunk, samples - start);
  }
};

/// Runs fn(stream, count) -> Acc once per chunk and folds the partial results
/// in chunk order with merge(acc, part).
template <class Acc, class Fn, class Merge>
Acc run_chunks(const SamplePlan& plan, Acc init, Fn&& fn, Merge&& merge) {
  const std::size_t n = plan.chunks();
  std::vector<Acc> parts(n, init);
  parallel_for(n, plan.threads, [&](std::size_t k) {
    RandomStream rng(plan.seed, plan.stream_base + k);
    parts[k] = fn(rng, plan.chunk_size(k));
  });
  Acc acc = init;
  for (auto& p : parts) merge(acc, p);
  return acc;
}

}  // namespace mmh

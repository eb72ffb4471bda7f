#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hypervec {

// Worker count: HYPERVEC_THREADS env var if set, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("HYPERVEC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(begin, end) over fixed-size chunks of [begin, end). Chunk
// boundaries depend only on (begin, end, chunk), never on the worker count,
// so any writes that are per-chunk-disjoint come out bit-identical
// regardless of how many threads execute.
inline void parallel_chunks(std::int64_t begin, std::int64_t end,
                            std::int64_t chunk,
                            const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (end <= begin) return;
  const std::int64_t n_chunks = (end - begin + chunk - 1) / chunk;
  unsigned workers = thread_count();
  if (workers <= 1 || n_chunks <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      std::int64_t lo = begin + c * chunk;
      fn(lo, std::min(end, lo + chunk));
    }
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      std::int64_t lo = begin + c * chunk;
      fn(lo, std::min(end, lo + chunk));
    }
  };
  std::vector<std::thread> pool;
  unsigned spawn = static_cast<unsigned>(
      std::min<std::int64_t>(workers, n_chunks));
  pool.reserve(spawn - 1);
  for (unsigned t = 1; t < spawn; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace hypervec

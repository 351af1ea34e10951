#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qmink {

/// Worker count: QMINK_THREADS caps hardware concurrency when set.
inline unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QMINK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, unsigned(v));
  }
  return n;
}

/// Runs fn(begin, end, chunk_index) over contiguous chunks of [0, n). Results
/// that depend only on the index stay deterministic for any thread count;
/// per-chunk reductions can be combined in chunk order afterwards.
template <typename Fn> void parallel_for(long n, Fn&& fn) {
  const unsigned workers = unsigned(std::min<long>(thread_cap(), std::max<long>(1, n)));
  if (workers <= 1) {
    fn(0L, n, 0u);
    return;
  }
  const long chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const long begin = long(w) * chunk;
    const long end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qmink

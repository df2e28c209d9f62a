#ifndef MF_PARALLEL_HPP
#define MF_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mf {

/// Worker cap from MF_THREADS (default: hardware concurrency).
inline int thread_count() {
  if (const char* env = std::getenv("MF_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      return 1;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end) over [0, n) in contiguous chunks. Each index is
/// handled by exactly one call, so results written per index are independent
/// of the thread count.
template <class Body>
void parallel_for(std::ptrdiff_t n, Body&& body, std::ptrdiff_t grain = 1 << 15) {
  const int workers =
      static_cast<int>(std::min<std::ptrdiff_t>(thread_count(), (n + grain - 1) / grain));
  if (workers <= 1) {
    if (n > 0) body(std::ptrdiff_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::ptrdiff_t b = w * chunk;
    const std::ptrdiff_t e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mf

#endif  // MF_PARALLEL_HPP

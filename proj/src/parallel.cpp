#include "qrstats/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace qrs {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  unsigned n = g_threads.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_chunks(std::uint64_t begin0, std::uint64_t end0,
                     std::uint64_t chunk_size,
                     const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& body) {
  if (end0 <= begin0) return;
  chunk_size = std::max<std::uint64_t>(1, chunk_size);
  const std::uint64_t n_chunks = (end0 - begin0 + chunk_size - 1) / chunk_size;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(thread_count(), n_chunks));

  if (workers <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      std::uint64_t b = begin0 + c * chunk_size;
      std::uint64_t e = std::min(end0, b + chunk_size);
      body(static_cast<std::size_t>(c), b, e);
    }
    return;
  }

  std::atomic<std::uint64_t> next{0};
  auto run = [&]() {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) break;
      std::uint64_t b = begin0 + c * chunk_size;
      std::uint64_t e = std::min(end0, b + chunk_size);
      body(static_cast<std::size_t>(c), b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

}  // namespace qrs

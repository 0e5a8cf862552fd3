#ifndef QRSTATS_PARALLEL_HPP
#define QRSTATS_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace qrs {

// Global worker count used by the chunked loops below. 0 means
// "hardware concurrency". Results are independent of this setting:
// chunks are fixed by the range, not by the worker count, and merges
// happen in chunk order.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(chunk_index, begin, end) over [begin0, end0) split into
/// fixed-size chunks. Bodies must not touch shared mutable state except
/// through their own chunk slot.
void parallel_chunks(std::uint64_t begin0, std::uint64_t end0,
                     std::uint64_t chunk_size,
                     const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& body);

}  // namespace qrs

#endif

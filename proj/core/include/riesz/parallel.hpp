#pragma once

#include <cstddef>
#include <functional>

namespace riesz {

/// Upper bound on worker threads used by the library; 0 means
/// std::thread::hardware_concurrency(). Results never depend on this value:
/// work is split into fixed chunks whose partial results are reduced in
/// chunk order.
void set_max_threads(unsigned threads) noexcept;
unsigned max_threads() noexcept;

/// Runs body(chunk_begin, chunk_end, chunk_index) over [0, count) split into
/// fixed-width chunks. Chunk boundaries depend only on count and chunk_size.
void parallel_for_chunks(std::size_t count, std::size_t chunk_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t count, std::size_t chunk_size) noexcept {
  return (count + chunk_size - 1) / chunk_size;
}

}  // namespace riesz

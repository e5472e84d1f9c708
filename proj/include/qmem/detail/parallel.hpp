#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qmem::detail {

/// Runs fn(chunk_index) for every chunk on up to `workers` threads.
/// Chunks self-assign through an atomic counter; each fn call must write
/// only chunk-local state so results never depend on scheduling.
inline void for_each_chunk(std::size_t chunk_count, int workers,
                           const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || chunk_count <= 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunk_count || failed.load()) return;
      try {
        fn(c);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<std::size_t>(workers, chunk_count);
  pool.reserve(count);
  for (int i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace qmem::detail

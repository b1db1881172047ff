#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace deltrace {

// Splits [0, count) into fixed-size chunks, evaluates `body(begin, end)` for
// each chunk on up to `workers` threads, and returns the per-chunk results in
// chunk order. Chunk boundaries depend only on `count` and `chunk_size`, so a
// fold over the returned vector is bit-identical for any worker count.
template <class Body>
auto map_chunks(std::size_t count, std::size_t chunk_size, unsigned workers, Body&& body)
    -> std::vector<decltype(body(std::size_t{}, std::size_t{}))> {
  using Result = decltype(body(std::size_t{}, std::size_t{}));
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<Result> results(chunks);
  if (chunks == 0) return results;

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(count, begin + chunk_size);
    results[c] = body(begin, end);
  };

  const unsigned threads = std::min<std::size_t>(std::max(workers, 1u), chunks);
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
        try {
          run_chunk(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return results;
}

unsigned default_workers() noexcept;

}  // namespace deltrace

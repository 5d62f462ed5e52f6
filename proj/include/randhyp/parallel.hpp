#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace randhyp {

/// Calls fn(begin, end) over consecutive blocks of [0, count) on up to
/// `threads` workers. Callers write results by index, so the outcome does
/// not depend on scheduling.
template <class Fn>
void parallel_blocks(std::size_t count, unsigned threads, std::size_t block, Fn&& fn) {
  if (count == 0) return;
  block = std::max<std::size_t>(block, 1);
  const std::size_t nblocks = (count + block - 1) / block;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), nblocks));
  if (workers == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) fn(b * block, std::min(count, (b + 1) * block));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        fn(b * block, std::min(count, (b + 1) * block));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = nblocks;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

/// out[i] = fn(i) for i in [0, count).
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, unsigned threads, Fn&& fn, std::size_t block = 64) {
  std::vector<T> out(count);
  parallel_blocks(count, threads, block, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = fn(i);
  });
  return out;
}

}  // namespace randhyp

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace squadmds {

/// Runs fn(0..nblocks-1) across up to `workers` threads, pulling block
/// indices from a shared counter. Callers keep results worker-count
/// invariant by writing only to block-private or row-disjoint storage and
/// combining partials in block order afterwards; the block structure itself
/// never depends on the worker count. workers <= 1 runs inline.
template <typename F>
void parallel_for_blocks(int workers, std::size_t nblocks, F&& fn) {
  if (workers <= 1 || nblocks <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::size_t nthreads = static_cast<std::size_t>(workers);
  if (nthreads > nblocks) nthreads = nblocks;

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (std::size_t i = 0; i < nthreads; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Number of reduction blocks used for deterministic accumulation. Fixed
/// (not derived from the worker count) so sequential and parallel runs
/// produce bitwise identical sums.
inline constexpr std::size_t kReductionBlocks = 64;

/// Splits [0, count) into kReductionBlocks near-equal ranges and returns
/// the half-open bounds of block b.
inline void block_range(std::size_t count, std::size_t b, std::size_t& begin,
                        std::size_t& end) {
  begin = count * b / kReductionBlocks;
  end = count * (b + 1) / kReductionBlocks;
}

}  // namespace squadmds

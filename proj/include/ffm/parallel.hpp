#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace ffm {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Split [0, total) into `threads` contiguous chunks and run `work` on each,
/// returning the partial results in chunk order. Workers own disjoint
/// ranges; the caller folds the partials sequentially, so with exact
/// arithmetic the reduction is independent of thread count and scheduling.
template <typename Partial, typename Work>
std::vector<Partial> run_partitions(std::uint64_t total, unsigned threads,
                                    Work work) {
  threads = resolve_threads(threads);
  if (threads > total && total > 0) threads = static_cast<unsigned>(total);
  if (threads <= 1 || total == 0) {
    std::vector<Partial> out;
    out.push_back(work(std::uint64_t{0}, total));
    return out;
  }
  const std::uint64_t chunk = (total + threads - 1) / threads;
  std::vector<Partial> partials;
  partials.reserve(threads);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t from = std::uint64_t(t) * chunk;
    const std::uint64_t to = std::min(total, from + chunk);
    if (from >= to) break;
    ranges.emplace_back(from, to);
    partials.push_back(Partial{});
  }
  std::vector<std::exception_ptr> errors(ranges.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    pool.emplace_back([&, i] {
      try {
        partials[i] = work(ranges[i].first, ranges[i].second);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return partials;
}

}  // namespace ffm

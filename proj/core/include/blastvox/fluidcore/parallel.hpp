#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/parallel_reduce.h>

namespace blastvox::parallel {

/// Worker count from BLASTVOX_THREADS (0 or unset: TBB default).
int configuredWorkers();
/// True unless BLASTVOX_DETERMINISTIC=0. Deterministic mode fixes the
/// reduction tree so sums are bit-identical for any worker count.
bool deterministicMode();
void setDeterministicMode(bool on);

/// Scoped cap on the number of TBB workers.
class WorkerLimit {
 public:
  explicit WorkerLimit(int workers);
  ~WorkerLimit();
  WorkerLimit(const WorkerLimit&) = delete;
  WorkerLimit& operator=(const WorkerLimit&) = delete;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Applies BLASTVOX_THREADS for the lifetime of the returned object.
WorkerLimit fromEnvironment();

inline constexpr std::size_t kReductionChunk = 4096;

template <class Fn>
void forRange(std::size_t begin, std::size_t end, Fn&& fn, std::size_t grain = 256) {
  if (end <= begin) return;
  tbb::parallel_for(tbb::blocked_range<std::size_t>(begin, end, grain),
                    [&](const tbb::blocked_range<std::size_t>& r) {
                      for (std::size_t i = r.begin(); i != r.end(); ++i) fn(i);
                    });
}

/// Sum of fn(i) over [0, n). Deterministic mode accumulates fixed-size
/// chunks in parallel and then combines the chunk sums in index order, so
/// the result does not depend on the worker count. Otherwise TBB's adaptive
/// reduction is used.
template <class T, class Fn>
T sum(std::size_t n, T zero, Fn&& fn) {
  if (!deterministicMode()) {
    return tbb::parallel_reduce(
        tbb::blocked_range<std::size_t>(0, n), zero,
        [&](const tbb::blocked_range<std::size_t>& r, T acc) {
          for (std::size_t i = r.begin(); i != r.end(); ++i) acc += fn(i);
          return acc;
        },
        [](T a, const T& b) { return T(a + b); });
  }
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<T> partial(chunks, zero);
  tbb::parallel_for(std::size_t{0}, chunks, [&](std::size_t c) {
    T acc = zero;
    const std::size_t lo = c * kReductionChunk;
    const std::size_t hi = std::min(n, lo + kReductionChunk);
    for (std::size_t i = lo; i < hi; ++i) acc += fn(i);
    partial[c] = acc;
  });
  T total = zero;
  for (const T& p : partial) total += p;
  return total;
}

}  // namespace blastvox::parallel

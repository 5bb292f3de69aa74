// SPDX-License-Identifier: Apache-2.0
//
// OpenMP helpers with deterministic results: loops write disjoint slots and
// reductions use a fixed block structure, so outputs are bitwise identical to
// the serial reference at any thread count.

#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dxl::par {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Parallel loop over disjoint indices; f(i) must only touch slot i state.
template <class F>
void parallel_for(std::int64_t count, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    f(i);
  }
}

template <class F>
void serial_for(std::int64_t count, F&& f) {
  for (std::int64_t i = 0; i < count; ++i) {
    f(i);
  }
}

/// Fixed block size used by the deterministic reductions.
inline constexpr std::int64_t kReduceBlock = 256;

/// Blocked map-reduce: indices are split into fixed blocks of kReduceBlock,
/// each block is accumulated serially in index order (accumulate(acc, i)),
/// blocks run in parallel, and the per-block partials are combined serially
/// in block order (combine(total, partial)). The floating-point summation
/// tree therefore does not depend on the thread count.
template <class Acc, class MakeAcc, class Accumulate, class Combine>
Acc blocked_reduce(std::int64_t count, MakeAcc make_acc, Accumulate accumulate, Combine combine,
                   bool parallel = true) {
  const std::int64_t blocks = count <= 0 ? 0 : (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<Acc> partials;
  partials.reserve(blocks);
  for (std::int64_t b = 0; b < blocks; ++b) {
    partials.push_back(make_acc());
  }

  auto run_block = [&](std::int64_t b) {
    const std::int64_t begin = b * kReduceBlock;
    const std::int64_t end = std::min(count, begin + kReduceBlock);
    for (std::int64_t i = begin; i < end; ++i) {
      accumulate(partials[b], i);
    }
  };
  if (parallel) {
    parallel_for(blocks, run_block);
  } else {
    serial_for(blocks, run_block);
  }

  Acc total = make_acc();
  for (std::int64_t b = 0; b < blocks; ++b) {
    combine(total, partials[b]);
  }
  return total;
}

}  // namespace dxl::par

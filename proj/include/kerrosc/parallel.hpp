// parallel.hpp — OpenMP work distribution with a deterministic serial contract.
//
// All hot kernels run over fixed-size batches. Each batch is evaluated by a
// plain serial loop and the per-batch results are combined in batch order, so
// the parallel path is bit-identical to the serial reference regardless of
// thread count or schedule. Tests assert this equality.

#pragma once

#include <cstddef>
#include <vector>

namespace kerrosc {

inline constexpr std::size_t kDefaultBatch = 8192;

// Evaluate per_batch(begin, end) for consecutive index ranges covering [0, n)
// and fold the results in batch order with combine(acc, part).
template <class Acc, class PerBatch, class Combine>
Acc batched_reduce(std::size_t n, std::size_t batch_size, Acc init,
                   PerBatch per_batch, Combine combine, bool parallel) {
    if (n == 0) return init;
    if (batch_size == 0) batch_size = kDefaultBatch;
    const std::size_t n_batches = (n + batch_size - 1) / batch_size;
    std::vector<Acc> parts(n_batches, init);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long b = 0; b < static_cast<long long>(n_batches); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * batch_size;
        const std::size_t hi = lo + batch_size < n ? lo + batch_size : n;
        parts[static_cast<std::size_t>(b)] = per_batch(lo, hi);
    }

    Acc acc = init;
    for (const Acc& part : parts) acc = combine(acc, part);
    return acc;
}

// Parallel loop over independent output slots (no reduction involved).
template <class Fn>
void parallel_for(std::size_t n, Fn fn, bool parallel) {
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        fn(static_cast<std::size_t>(i));
    }
}

} // namespace kerrosc

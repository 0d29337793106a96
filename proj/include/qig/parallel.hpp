#ifndef QIG_PARALLEL_HPP
#define QIG_PARALLEL_HPP

#include <cstdint>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qig {

/// Execution mode for the sampling kernels. Every kernel has a serial path
/// that is the reference implementation; the OpenMP path must produce the
/// same result for any thread count, which the kernels guarantee by seeding
/// per index and reducing only with order-independent operations
/// (min, argmin with lowest-index tie-break, integer sums).
enum class Exec { Serial, OpenMp };

template <typename Fn>
void parallel_for(std::int64_t n, Exec exec, Fn&& body) {
    if (exec == Exec::OpenMp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
#endif
    }
    for (std::int64_t i = 0; i < n; ++i) {
        body(i);
    }
}

/// Minimum of value_at(i) over i in [0, n), with the lowest attaining index.
/// Ties break to the lowest index in both modes.
template <typename Fn>
std::pair<double, std::int64_t> min_index_scan(std::int64_t n, Exec exec, Fn&& value_at) {
    double best = std::numeric_limits<double>::infinity();
    std::int64_t best_i = -1;
    if (exec == Exec::OpenMp) {
#ifdef _OPENMP
#pragma omp parallel
        {
            double local = std::numeric_limits<double>::infinity();
            std::int64_t local_i = -1;
#pragma omp for schedule(static) nowait
            for (std::int64_t i = 0; i < n; ++i) {
                const double v = value_at(i);
                if (v < local || (v == local && i < local_i)) {
                    local = v;
                    local_i = i;
                }
            }
#pragma omp critical(qig_min_index_scan)
            {
                if (local < best || (local == best && local_i < best_i)) {
                    best = local;
                    best_i = local_i;
                }
            }
        }
        return {best, best_i};
#endif
    }
    for (std::int64_t i = 0; i < n; ++i) {
        const double v = value_at(i);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    return {best, best_i};
}

/// Lowest index in [0, n) where pred(i) is true, or -1. Scans in chunks so
/// the parallel path can stop early without losing determinism.
template <typename Fn>
std::int64_t find_first(std::int64_t n, Exec exec, Fn&& pred, std::int64_t chunk = 256) {
    for (std::int64_t start = 0; start < n; start += chunk) {
        const std::int64_t end = std::min(n, start + chunk);
        std::int64_t found = std::numeric_limits<std::int64_t>::max();
        if (exec == Exec::OpenMp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : found)
            for (std::int64_t i = start; i < end; ++i) {
                if (pred(i)) {
                    found = std::min(found, i);
                }
            }
#else
            for (std::int64_t i = start; i < end; ++i) {
                if (pred(i)) {
                    found = i;
                    break;
                }
            }
#endif
        } else {
            for (std::int64_t i = start; i < end; ++i) {
                if (pred(i)) {
                    found = i;
                    break;
                }
            }
        }
        if (found != std::numeric_limits<std::int64_t>::max()) {
            return found;
        }
    }
    return -1;
}

/// Chunked classification scan. classify(i) returns 0 (skipped), 1 (clean) or
/// 2 (hit). Scanning stops after the first chunk containing a hit; first_hit
/// is the lowest hit index. The skipped/clean counters cover every index in
/// the scanned chunks, so they are deterministic for any thread count (and
/// only meaningful for callers when no hit occurred).
struct ScanResult {
    std::int64_t first_hit = -1;
    long clean = 0;
    long skipped = 0;
};

template <typename Fn>
ScanResult chunked_scan(std::int64_t n, Exec exec, Fn&& classify, std::int64_t chunk = 256) {
    ScanResult result;
    for (std::int64_t start = 0; start < n; start += chunk) {
        const std::int64_t end = std::min(n, start + chunk);
        std::int64_t hit = std::numeric_limits<std::int64_t>::max();
        long clean = 0;
        long skipped = 0;
        if (exec == Exec::OpenMp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : hit) reduction(+ : clean, skipped)
            for (std::int64_t i = start; i < end; ++i) {
                const int c = classify(i);
                if (c == 2) {
                    hit = std::min(hit, i);
                } else if (c == 1) {
                    ++clean;
                } else {
                    ++skipped;
                }
            }
#else
            for (std::int64_t i = start; i < end; ++i) {
                const int c = classify(i);
                if (c == 2) {
                    hit = std::min(hit, i);
                } else if (c == 1) {
                    ++clean;
                } else {
                    ++skipped;
                }
            }
#endif
        } else {
            for (std::int64_t i = start; i < end; ++i) {
                const int c = classify(i);
                if (c == 2) {
                    hit = std::min(hit, i);
                } else if (c == 1) {
                    ++clean;
                } else {
                    ++skipped;
                }
            }
        }
        result.clean += clean;
        result.skipped += skipped;
        if (hit != std::numeric_limits<std::int64_t>::max()) {
            result.first_hit = hit;
            return result;
        }
    }
    return result;
}

}  // namespace qig

#endif

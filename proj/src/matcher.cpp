// SPDX-License-Identifier: Apache-2.0
#include "facetag/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "facetag/distance.hpp"
#include "facetag/worker_pool.hpp"

namespace facetag {

namespace {

// Running minimum over one chunk. Strictly-less comparison on the squared
// distance keeps the lowest index on ties.
LocalBest scan_range(const GallerySnapshot& snapshot, const float* probe,
                     ChunkRange range) {
    const std::size_t dim = snapshot.dim();
    LocalBest best{range.begin, std::numeric_limits<double>::infinity()};
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const double sq = detail::sum_squared_diff(snapshot.row(i), probe, dim);
        if (sq < best.sq_distance) {
            best.index = i;
            best.sq_distance = sq;
        }
    }
    return best;
}

MatchResult finish(const GallerySnapshot& snapshot, const LocalBest& best,
                   const SearchConfig& config) {
    const double dist = std::sqrt(best.sq_distance);
    return MatchResult{best.index, snapshot.id(best.index), dist,
                       is_match(dist, config.threshold)};
}

void check_probe(const GallerySnapshot& snapshot, const Embedding& probe,
                 const SearchConfig& config, const char* context) {
    config.validate();
    if (probe.dim() != snapshot.dim())
        throw DimensionError(snapshot.dim(), probe.dim(), context);
}

}  // namespace

ChunkPlan plan_chunks(std::size_t n, const SearchConfig& config) {
    config.validate();
    ChunkPlan plan;
    if (n == 0) return plan;

    // min_chunk is the smallest per-worker slice, so it bounds the chunk
    // count from above via n / min_chunk (floor, clamped to one chunk).
    const std::size_t by_min_chunk = std::max<std::size_t>(1, n / config.min_chunk);
    const std::size_t chunks = std::min<std::size_t>(config.workers, by_min_chunk);

    const std::size_t base = n / chunks;
    const std::size_t extra = n % chunks;  // first `extra` chunks get one more
    plan.ranges.reserve(chunks);
    std::size_t start = 0;
    for (std::size_t i = 0; i < chunks; ++i) {
        const std::size_t len = base + (i < extra ? 1 : 0);
        plan.ranges.push_back(ChunkRange{start, start + len});
        start += len;
    }
    return plan;
}

std::optional<MatchResult> search_sequential(const GallerySnapshot& snapshot,
                                             const Embedding& probe,
                                             const SearchConfig& config) {
    check_probe(snapshot, probe, config, "search_sequential");
    const std::size_t n = snapshot.size();
    if (n == 0) return std::nullopt;
    return finish(snapshot, scan_range(snapshot, probe.data(), ChunkRange{0, n}), config);
}

std::optional<MatchResult> search_parallel(const GallerySnapshot& snapshot,
                                           const Embedding& probe,
                                           const SearchConfig& config) {
    check_probe(snapshot, probe, config, "search_parallel");
    const std::size_t n = snapshot.size();
    if (n == 0) return std::nullopt;

    const ChunkPlan plan = plan_chunks(n, config);
    const std::size_t chunks = plan.chunk_count();
    if (chunks == 1) {
        return finish(snapshot, scan_range(snapshot, probe.data(), plan.ranges[0]),
                      config);
    }

    std::vector<LocalBest> bests(chunks);
    const float* probe_data = probe.data();

    WorkerPool& pool = WorkerPool::shared();
    pool.ensure_threads(static_cast<unsigned>(chunks) - 1);
    pool.fork_join(chunks, [&](std::size_t i) {
        bests[i] = scan_range(snapshot, probe_data, plan.ranges[i]);
    });

    // Reduce in ascending range order so the global lowest-index tie-break
    // matches the sequential scan exactly.
    LocalBest global = bests[0];
    for (std::size_t i = 1; i < chunks; ++i) {
        if (bests[i].sq_distance < global.sq_distance) global = bests[i];
    }
    return finish(snapshot, global, config);
}

std::vector<std::optional<MatchResult>> search_batch(const GallerySnapshot& snapshot,
                                                     std::span<const Embedding> probes,
                                                     const SearchConfig& config) {
    config.validate();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (probes[i].dim() != snapshot.dim())
            throw DimensionError(snapshot.dim(), probes[i].dim(),
                                 "search_batch probe " + std::to_string(i));
    }

    std::vector<std::optional<MatchResult>> results;
    results.reserve(probes.size());
    for (const Embedding& probe : probes)
        results.push_back(search_parallel(snapshot, probe, config));
    return results;
}

}  // namespace facetag

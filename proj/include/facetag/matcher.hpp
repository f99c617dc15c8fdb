// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "facetag/gallery.hpp"
#include "facetag/types.hpp"

namespace facetag {

// Half-open index interval assigned to one worker.
struct ChunkRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - begin; }
    friend bool operator==(const ChunkRange&, const ChunkRange&) = default;
};

// Disjoint contiguous ranges covering [0, n) exactly once, sorted by start.
struct ChunkPlan {
    std::vector<ChunkRange> ranges;

    std::size_t chunk_count() const noexcept { return ranges.size(); }
};

// A worker's running minimum over its range. Distances are compared in
// squared form; the square root is taken once, on the global winner.
struct LocalBest {
    std::size_t index = 0;
    double sq_distance = 0.0;
};

// Splits n records into at most config.workers balanced contiguous chunks
// (sizes differ by at most one). min_chunk caps the worker count so no chunk
// is smaller than min(min_chunk, n): the split uses
// min(workers, max(1, n / min_chunk)) chunks.
ChunkPlan plan_chunks(std::size_t n, const SearchConfig& config);

// Full scan in index order; ties broken toward the lowest index. Returns
// nullopt only for an empty snapshot. Rejection still reports the best match,
// just with accepted=false.
std::optional<MatchResult> search_sequential(const GallerySnapshot& snapshot,
                                             const Embedding& probe,
                                             const SearchConfig& config);

// Chunk-partitioned multi-worker scan. Returns a value identical to
// search_sequential for the same inputs: same index, bit-identical distance,
// same accepted flag, for every worker count.
std::optional<MatchResult> search_parallel(const GallerySnapshot& snapshot,
                                           const Embedding& probe,
                                           const SearchConfig& config);

// Element i equals search_parallel(snapshot, probes[i], config).
std::vector<std::optional<MatchResult>> search_batch(const GallerySnapshot& snapshot,
                                                     std::span<const Embedding> probes,
                                                     const SearchConfig& config);

}  // namespace facetag

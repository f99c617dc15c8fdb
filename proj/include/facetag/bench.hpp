// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "facetag/gallery.hpp"
#include "facetag/types.hpp"

namespace facetag {

// One speedup experiment: for every (gallery size, worker count) cell,
// time search_parallel over seeded synthetic data.
struct BenchSpec {
    std::vector<std::size_t> gallery_sizes;  // e.g. 1k, 10k, 100k, 1M
    std::vector<unsigned> worker_counts;
    std::size_t probes_per_point = 8;
    std::size_t dim = kDefaultDim;
    std::uint64_t seed = 42;
    std::size_t warmup_iters = 3;

    void validate() const;
};

struct BenchRow {
    std::size_t gallery_size = 0;
    unsigned workers = 0;
    double mean_search_us = 0.0;
    double p95_search_us = 0.0;
    // Same-size 1-worker mean divided by this row's mean; exactly 1.0 for
    // 1-worker rows by definition.
    double speedup_vs_1 = 1.0;
};

struct MachineInfo {
    unsigned logical_cpus = 0;
    unsigned physical_cores = 0;
    std::string cpu_model;
};

struct BenchResult {
    std::vector<BenchRow> rows;  // sorted by (gallery_size, workers)
    MachineInfo machine;
    BenchSpec spec;
};

// Physical core count from sysfs topology, falling back to the logical CPU
// count when the topology files are unreadable.
MachineInfo probe_machine();

// Seeded synthetic gallery: ids "subj-<i>", embeddings uniform in [-1, 1).
GallerySnapshot synthetic_snapshot(std::size_t size, std::size_t dim, std::uint64_t seed);
std::vector<Embedding> synthetic_probes(std::size_t count, std::size_t dim,
                                        std::uint64_t seed);

// Runs every cell, never two concurrently. Each cell reuses the same
// per-size gallery and probe set, warms up, then times each probe search.
// A sampled 1% of timed results (at least one per cell) is cross-checked
// against search_sequential; any mismatch throws BenchError. When the
// worker list lacks 1, a hidden 1-worker baseline is measured per size so
// speedup_vs_1 is always well-defined.
BenchResult run_bench(const BenchSpec& spec);

// CSV with '#' metadata comment lines, then
// gallery_size,workers,mean_search_us,p95_search_us,speedup_vs_1.
void write_csv(const BenchResult& result, std::ostream& out);

}  // namespace facetag

// SPDX-License-Identifier: Apache-2.0
#include "facetag/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "facetag/matcher.hpp"
#include "facetag/rng.hpp"

namespace facetag {

namespace {

using Clock = std::chrono::steady_clock;

double us_since(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

double percentile(std::vector<double> sample, double p) {
    if (sample.empty()) return 0.0;
    std::sort(sample.begin(), sample.end());
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(p * static_cast<double>(sample.size())));
    return sample[std::max<std::size_t>(rank, 1) - 1];
}

double mean(const std::vector<double>& sample) {
    double sum = 0.0;
    for (double v : sample) sum += v;
    return sample.empty() ? 0.0 : sum / static_cast<double>(sample.size());
}

std::string read_first_match(const char* path, const std::string& key) {
    std::ifstream file(path);
    std::string line;
    while (std::getline(file, line)) {
        if (line.rfind(key, 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                auto value = line.substr(colon + 1);
                const auto first = value.find_first_not_of(" \t");
                if (first != std::string::npos) return value.substr(first);
            }
        }
    }
    return {};
}

// Times one cell: warmup, then one timed search per probe.
struct CellTiming {
    std::vector<double> per_probe_us;
};

CellTiming time_cell(const GallerySnapshot& snapshot,
                     const std::vector<Embedding>& probes, const SearchConfig& config,
                     std::size_t warmup_iters) {
    for (std::size_t w = 0; w < warmup_iters; ++w)
        (void)search_parallel(snapshot, probes[w % probes.size()], config);

    CellTiming timing;
    timing.per_probe_us.reserve(probes.size());
    for (const Embedding& probe : probes) {
        const auto start = Clock::now();
        const auto result = search_parallel(snapshot, probe, config);
        timing.per_probe_us.push_back(us_since(start));
        (void)result;
    }
    return timing;
}

// Re-runs a sampled 1% of probes (at least one) sequentially and requires
// exact index and bit-level distance agreement.
void cross_check(const GallerySnapshot& snapshot, const std::vector<Embedding>& probes,
                 const SearchConfig& config) {
    constexpr std::size_t kStep = 100;  // 1% sample; index 0 is always checked
    for (std::size_t i = 0; i < probes.size(); i += kStep) {
        const auto par = search_parallel(snapshot, probes[i], config);
        const auto seq = search_sequential(snapshot, probes[i], config);
        const bool same =
            par.has_value() == seq.has_value() &&
            (!par || (par->best_index == seq->best_index &&
                      par->distance == seq->distance && par->accepted == seq->accepted));
        if (!same)
            throw BenchError("parallel/sequential mismatch at gallery size " +
                             std::to_string(snapshot.size()) + ", workers " +
                             std::to_string(config.workers) + ", probe " +
                             std::to_string(i));
    }
}

}  // namespace

void BenchSpec::validate() const {
    if (gallery_sizes.empty()) throw Error("bench spec: gallery_sizes must be non-empty");
    if (worker_counts.empty()) throw Error("bench spec: worker_counts must be non-empty");
    for (unsigned w : worker_counts)
        if (w < 1) throw Error("bench spec: worker counts must be >= 1");
    for (std::size_t s : gallery_sizes)
        if (s < 1) throw Error("bench spec: gallery sizes must be >= 1");
    if (probes_per_point < 1) throw Error("bench spec: probes_per_point must be >= 1");
    if (dim < 1) throw Error("bench spec: dim must be >= 1");
}

MachineInfo probe_machine() {
    MachineInfo info;
    info.logical_cpus = std::max(1u, std::thread::hardware_concurrency());

    // Count distinct (package, core) pairs from sysfs.
    std::set<std::pair<std::string, std::string>> cores;
    for (unsigned cpu = 0; cpu < info.logical_cpus; ++cpu) {
        const std::string base =
            "/sys/devices/system/cpu/cpu" + std::to_string(cpu) + "/topology/";
        std::ifstream core_file(base + "core_id");
        std::ifstream pkg_file(base + "physical_package_id");
        std::string core_id, pkg_id;
        if (core_file >> core_id && pkg_file >> pkg_id) cores.emplace(pkg_id, core_id);
    }
    info.physical_cores =
        cores.empty() ? info.logical_cpus : static_cast<unsigned>(cores.size());
    info.cpu_model = read_first_match("/proc/cpuinfo", "model name");
    return info;
}

GallerySnapshot synthetic_snapshot(std::size_t size, std::size_t dim,
                                   std::uint64_t seed) {
    std::vector<std::string> ids;
    std::vector<std::string> names;
    ids.reserve(size);
    names.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        ids.push_back("subj-" + std::to_string(i));
        names.push_back(ids.back());
    }
    std::vector<float> flat(size * dim);
    SplitMix64 rng(seed);
    fill_uniform(flat.data(), flat.size(), rng);
    return GallerySnapshot::from_parts(dim, std::move(ids), std::move(names),
                                       std::move(flat));
}

std::vector<Embedding> synthetic_probes(std::size_t count, std::size_t dim,
                                        std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Embedding> probes;
    probes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) probes.push_back(random_embedding(dim, rng));
    return probes;
}

BenchResult run_bench(const BenchSpec& spec) {
    spec.validate();

    BenchResult result;
    result.machine = probe_machine();
    result.spec = spec;

    std::vector<std::size_t> sizes = spec.gallery_sizes;
    std::sort(sizes.begin(), sizes.end());
    std::vector<unsigned> workers = spec.worker_counts;
    std::sort(workers.begin(), workers.end());
    const bool has_one = !workers.empty() && workers.front() == 1;

    for (std::size_t size_idx = 0; size_idx < sizes.size(); ++size_idx) {
        const std::size_t size = sizes[size_idx];
        const GallerySnapshot snapshot =
            synthetic_snapshot(size, spec.dim, spec.seed + size);
        const std::vector<Embedding> probes =
            synthetic_probes(spec.probes_per_point, spec.dim, spec.seed ^ 0x9E3779B9u);

        // Cells run min_chunk=1 so the requested worker count is honored
        // exactly at every gallery size; the experiment isolates worker
        // scaling, including its overhead on small galleries.
        double baseline_mean_us = 0.0;
        bool baseline_set = false;
        if (!has_one) {
            // Hidden 1-worker baseline so speedup_vs_1 stays well-defined.
            SearchConfig config{.threshold = kDefaultThreshold, .workers = 1,
                                .min_chunk = 1};
            const CellTiming timing =
                time_cell(snapshot, probes, config, spec.warmup_iters);
            cross_check(snapshot, probes, config);
            baseline_mean_us = mean(timing.per_probe_us);
            baseline_set = true;
        }

        for (unsigned worker_count : workers) {
            SearchConfig config{.threshold = kDefaultThreshold, .workers = worker_count,
                                .min_chunk = 1};
            const CellTiming timing =
                time_cell(snapshot, probes, config, spec.warmup_iters);
            cross_check(snapshot, probes, config);

            BenchRow row;
            row.gallery_size = size;
            row.workers = worker_count;
            row.mean_search_us = mean(timing.per_probe_us);
            row.p95_search_us = percentile(timing.per_probe_us, 0.95);
            if (worker_count == 1) {
                row.speedup_vs_1 = 1.0;  // by definition
                if (!baseline_set) {
                    baseline_mean_us = row.mean_search_us;  // first 1-worker row
                    baseline_set = true;
                }
            } else {
                row.speedup_vs_1 = baseline_mean_us / row.mean_search_us;
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

void write_csv(const BenchResult& result, std::ostream& out) {
    out << "# facetag bench\n";
    out << "# logical_cpus: " << result.machine.logical_cpus << "\n";
    out << "# physical_cores: " << result.machine.physical_cores << "\n";
    if (!result.machine.cpu_model.empty())
        out << "# cpu_model: " << result.machine.cpu_model << "\n";
    out << "# dim: " << result.spec.dim << "\n";
    out << "# seed: " << result.spec.seed << "\n";
    out << "# probes_per_point: " << result.spec.probes_per_point << "\n";
    out << "# warmup_iters: " << result.spec.warmup_iters << "\n";
    out << "gallery_size,workers,mean_search_us,p95_search_us,speedup_vs_1\n";
    for (const BenchRow& row : result.rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%zu,%u,%.3f,%.3f,%.4f\n", row.gallery_size,
                      row.workers, row.mean_search_us, row.p95_search_us,
                      row.speedup_vs_1);
        out << buf;
    }
}

}  // namespace facetag

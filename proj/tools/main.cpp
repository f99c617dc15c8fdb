// SPDX-License-Identifier: Apache-2.0
//
// facetag — enroll face galleries, identify faces in frame streams, and
// benchmark the parallel matcher.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "facetag/bench.hpp"
#include "facetag/gallery.hpp"
#include "facetag/image_io.hpp"
#include "facetag/pipeline.hpp"
#include "facetag/provider.hpp"

namespace {

// Accepts plain integers plus k/K (x1000) and m/M (x1000000) suffixes.
std::uint64_t parse_count(const std::string& token) {
    if (token.empty()) throw CLI::ValidationError("count", "empty list entry");
    std::uint64_t scale = 1;
    std::string digits = token;
    const char last = token.back();
    if (last == 'k' || last == 'K') {
        scale = 1000;
        digits.pop_back();
    } else if (last == 'm' || last == 'M') {
        scale = 1000000;
        digits.pop_back();
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw CLI::ValidationError("count", "bad number '" + token + "'");
    return std::stoull(digits) * scale;
}

std::vector<std::uint64_t> parse_count_list(const std::string& list) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const auto end = comma == std::string::npos ? list.size() : comma;
        out.push_back(parse_count(list.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

int run_enroll(const std::string& images_dir, const std::string& gallery_path,
               std::size_t dim, bool dim_given, bool append) {
    std::optional<facetag::Gallery> gallery;
    if (append && std::filesystem::exists(gallery_path)) {
        gallery.emplace(facetag::Gallery::load(gallery_path));
        if (dim_given && gallery->dim() != dim) {
            std::cerr << "error: --dim " << dim << " conflicts with existing gallery dim "
                      << gallery->dim() << "\n";
            return 1;
        }
    } else {
        gallery.emplace(dim);
    }

    const facetag::MockProvider provider(gallery->dim());
    const std::size_t added = facetag::append_from_directory(
        *gallery, images_dir, provider,
        [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; });
    gallery->save(gallery_path);
    std::printf("enrolled %zu records\n", added);
    return 0;
}

int run_identify(const std::string& gallery_path, const std::string& frames_dir,
                 double threshold, unsigned workers, const std::string& report_path) {
    const facetag::Gallery gallery = facetag::Gallery::load(gallery_path);
    const facetag::GallerySnapshot snapshot = gallery.snapshot();
    const facetag::MockProvider provider(gallery.dim());

    facetag::SearchConfig config;
    config.threshold = threshold;
    config.workers = workers;

    std::ofstream report_file;
    std::ostream* out = &std::cout;
    if (!report_path.empty()) {
        report_file.open(report_path, std::ios::trunc);
        if (!report_file) throw facetag::IoError(report_path, "cannot open for writing");
        out = &report_file;
    }

    facetag::DirectoryFrameSource source(frames_dir);
    const facetag::RunSummary summary = facetag::run(
        source, provider, snapshot, config,
        [&](const facetag::FrameReport& report) {
            *out << facetag::frame_report_json(report).dump() << "\n";
        });
    out->flush();
    if (!*out) throw facetag::IoError(report_path, "write failed");

    std::fprintf(stderr,
                 "processed %llu frames, %llu faces, %llu accepted "
                 "(p50 %.3f ms, p95 %.3f ms, max %.3f ms)\n",
                 static_cast<unsigned long long>(summary.frames),
                 static_cast<unsigned long long>(summary.faces),
                 static_cast<unsigned long long>(summary.accepted), summary.p50_ms,
                 summary.p95_ms, summary.max_ms);
    return summary.complete ? 0 : 1;
}

int run_bench_cmd(const std::string& sizes_list, const std::string& workers_list,
                  std::size_t probes, std::size_t dim, std::uint64_t seed,
                  std::size_t warmup, const std::string& out_path) {
    facetag::BenchSpec spec;
    for (std::uint64_t s : parse_count_list(sizes_list))
        spec.gallery_sizes.push_back(static_cast<std::size_t>(s));
    for (std::uint64_t w : parse_count_list(workers_list))
        spec.worker_counts.push_back(static_cast<unsigned>(w));
    spec.probes_per_point = probes;
    spec.dim = dim;
    spec.seed = seed;
    spec.warmup_iters = warmup;

    const facetag::BenchResult result = facetag::run_bench(spec);

    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw facetag::IoError(out_path, "cannot open for writing");
    facetag::write_csv(result, out);
    out.flush();
    if (!out) throw facetag::IoError(out_path, "write failed");
    std::fprintf(stderr, "wrote %zu rows to %s\n", result.rows.size(), out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"face gallery enrollment, identification, and matcher benchmarks"};
    app.require_subcommand(1);

    // enroll
    auto* enroll = app.add_subcommand("enroll", "build or extend a gallery from images");
    std::string enroll_images, enroll_gallery;
    std::size_t enroll_dim = facetag::kDefaultDim;
    bool enroll_append = false;
    enroll->add_option("--images", enroll_images, "directory of face images")->required();
    enroll->add_option("--gallery", enroll_gallery, "gallery file to write (EMBG)")
        ->required();
    auto* dim_opt =
        enroll->add_option("--dim", enroll_dim, "embedding dimension (default 128)");
    enroll->add_flag("--append", enroll_append, "extend an existing gallery file");

    // identify
    auto* identify = app.add_subcommand("identify", "match faces in frames to a gallery");
    std::string id_gallery, id_frames, id_report;
    double id_threshold = facetag::kDefaultThreshold;
    unsigned id_workers = 1;
    identify->add_option("--gallery", id_gallery, "gallery file (EMBG)")->required();
    identify->add_option("--frames", id_frames, "directory of frame images")->required();
    identify->add_option("--threshold", id_threshold,
                         "match threshold, euclidean distance (default 0.6)");
    identify->add_option("--workers", id_workers, "search worker count (default 1)");
    identify->add_option("--report", id_report,
                         "JSON-lines report file (default: stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "speedup experiment over synthetic data");
    std::string bench_sizes, bench_workers, bench_out;
    std::size_t bench_probes = 8, bench_dim = facetag::kDefaultDim, bench_warmup = 3;
    std::uint64_t bench_seed = 42;
    bench->add_option("--sizes", bench_sizes, "gallery sizes, comma-separated (k/M ok)")
        ->required();
    bench->add_option("--workers", bench_workers, "worker counts, comma-separated")
        ->required();
    bench->add_option("--probes", bench_probes, "probes per (size, workers) cell");
    bench->add_option("--dim", bench_dim, "embedding dimension (default 128)");
    bench->add_option("--seed", bench_seed, "PRNG seed");
    bench->add_option("--warmup", bench_warmup, "warmup searches per cell (default 3)");
    bench->add_option("--out", bench_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    try {
        if (*enroll)
            return run_enroll(enroll_images, enroll_gallery, enroll_dim,
                              dim_opt->count() > 0, enroll_append);
        if (*identify)
            return run_identify(id_gallery, id_frames, id_threshold, id_workers,
                                id_report);
        if (*bench)
            return run_bench_cmd(bench_sizes, bench_workers, bench_probes, bench_dim,
                                 bench_seed, bench_warmup, bench_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const facetag::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

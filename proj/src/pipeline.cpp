// SPDX-License-Identifier: Apache-2.0
#include "facetag/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "facetag/image_io.hpp"
#include "facetag/rng.hpp"

namespace facetag {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Nearest-rank percentile of a sorted sample; 0 for an empty one.
double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
    return sorted[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

DirectoryFrameSource::DirectoryFrameSource(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) throw IoError(dir.string(), ec.message());
    for (const auto& entry : it) {
        if (entry.is_regular_file() && has_image_extension(entry.path()))
            paths_.push_back(entry.path());
    }
    std::sort(paths_.begin(), paths_.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });
}

std::optional<Frame> DirectoryFrameSource::next() {
    if (next_index_ >= paths_.size()) return std::nullopt;
    // Advance first: a frame that fails to decode must not wedge the stream.
    const std::filesystem::path& path = paths_[next_index_++];
    return load_frame(path);
}

SyntheticFrameSource::SyntheticFrameSource(std::size_t frame_count, int width,
                                           int height, std::uint64_t seed)
    : frame_count_(frame_count), width_(width), height_(height), seed_(seed) {}

std::optional<Frame> SyntheticFrameSource::next() {
    if (emitted_ >= frame_count_) return std::nullopt;
    const std::size_t i = emitted_++;
    SplitMix64 rng(seed_ + i);
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width_) * height_ * 3);
    for (std::size_t p = 0; p < pixels.size(); p += 8) {
        const std::uint64_t bits = rng.next();
        for (std::size_t b = 0; b < 8 && p + b < pixels.size(); ++b)
            pixels[p + b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    return Frame(width_, height_, std::move(pixels), "synthetic-" + std::to_string(i));
}

FrameReport process_frame(const Frame& frame, const EmbedProvider& provider,
                          const GallerySnapshot& snapshot, const SearchConfig& config) {
    if (provider.dim() != snapshot.dim())
        throw DimensionError(snapshot.dim(), provider.dim(), "process_frame");
    config.validate();

    const auto frame_start = Clock::now();
    FrameReport report;
    report.source_tag = frame.source_tag;

    const auto detect_start = Clock::now();
    const std::vector<FaceBox> boxes = provider.detect(frame);
    report.timings.detect_ms = ms_since(detect_start);

    report.faces.reserve(boxes.size());
    for (const FaceBox& box : boxes) {
        FaceOutcome outcome;
        outcome.box = box;

        const auto embed_start = Clock::now();
        std::optional<Embedding> embedding;
        try {
            embedding.emplace(provider.embed(frame, box));
        } catch (const Error& e) {
            outcome.error = e.what();
        }
        report.timings.embed_ms += ms_since(embed_start);

        if (embedding) {
            const auto search_start = Clock::now();
            outcome.match = search_parallel(snapshot, *embedding, config);
            report.timings.search_ms += ms_since(search_start);

            if (!outcome.match) {
                outcome.label = "unknown";
            } else if (outcome.match->accepted) {
                outcome.label = snapshot.name(outcome.match->best_index);
            } else {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.6f", outcome.match->distance);
                outcome.label = "unknown(" + outcome.match->best_id + ", " + buf + ")";
            }
        }
        report.faces.push_back(std::move(outcome));
    }

    report.timings.total_ms = ms_since(frame_start);
    return report;
}

RunSummary run(FrameSource& source, const EmbedProvider& provider,
               const GallerySnapshot& snapshot, const SearchConfig& config,
               const ReportSink& sink) {
    RunSummary summary;
    std::vector<double> totals;

    for (;;) {
        std::optional<Frame> frame;
        try {
            frame = source.next();
        } catch (const DecodeError& e) {
            // One bad frame: report it and keep going.
            FrameReport report;
            report.source_tag = e.path();
            report.frame_error = e.what();
            ++summary.frames;
            if (sink) sink(report);
            continue;
        } catch (const Error&) {
            summary.complete = false;
            break;
        }
        if (!frame) break;

        FrameReport report = process_frame(*frame, provider, snapshot, config);
        ++summary.frames;
        totals.push_back(report.timings.total_ms);
        for (const FaceOutcome& outcome : report.faces) {
            ++summary.faces;
            if (outcome.match && outcome.match->accepted) ++summary.accepted;
        }
        if (sink) sink(report);
    }

    std::sort(totals.begin(), totals.end());
    summary.p50_ms = percentile(totals, 0.50);
    summary.p95_ms = percentile(totals, 0.95);
    summary.max_ms = totals.empty() ? 0.0 : totals.back();
    return summary;
}

nlohmann::ordered_json frame_report_json(const FrameReport& report) {
    nlohmann::ordered_json j;
    j["source_tag"] = report.source_tag;
    j["frame_error"] = report.frame_error;

    auto boxes = nlohmann::ordered_json::array();
    auto ids = nlohmann::ordered_json::array();
    auto labels = nlohmann::ordered_json::array();
    auto distances = nlohmann::ordered_json::array();
    auto accepted = nlohmann::ordered_json::array();
    auto errors = nlohmann::ordered_json::array();
    for (const FaceOutcome& outcome : report.faces) {
        boxes.push_back({{"x", outcome.box.x},
                         {"y", outcome.box.y},
                         {"w", outcome.box.width},
                         {"h", outcome.box.height},
                         {"conf", outcome.box.confidence}});
        if (outcome.match) {
            ids.push_back(outcome.match->best_id);
            distances.push_back(outcome.match->distance);
            accepted.push_back(outcome.match->accepted);
        } else {
            ids.push_back(nullptr);
            distances.push_back(nullptr);
            accepted.push_back(false);
        }
        labels.push_back(outcome.label);
        errors.push_back(outcome.error);
    }
    j["boxes"] = std::move(boxes);
    j["ids"] = std::move(ids);
    j["labels"] = std::move(labels);
    j["distances"] = std::move(distances);
    j["accepted"] = std::move(accepted);
    j["errors"] = std::move(errors);
    j["timings"] = {{"detect_ms", report.timings.detect_ms},
                    {"embed_ms", report.timings.embed_ms},
                    {"search_ms", report.timings.search_ms},
                    {"total_ms", report.timings.total_ms}};
    return j;
}

}  // namespace facetag

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "facetag/gallery.hpp"
#include "facetag/matcher.hpp"
#include "facetag/provider.hpp"

namespace facetag {

// Yields frames until exhausted. Directory and synthetic sources are
// deterministic: same construction arguments, same frame sequence.
class FrameSource {
public:
    virtual ~FrameSource() = default;

    // nullopt at end of stream. May throw DecodeError for an undecodable
    // frame (the pipeline reports it and keeps going) or IoError for an
    // unrecoverable source failure (the pipeline stops).
    virtual std::optional<Frame> next() = 0;
};

// Image files under a directory, in lexicographic filename order.
class DirectoryFrameSource final : public FrameSource {
public:
    explicit DirectoryFrameSource(const std::filesystem::path& dir);

    std::optional<Frame> next() override;

private:
    std::vector<std::filesystem::path> paths_;
    std::size_t next_index_ = 0;
};

// Seeded noise frames, a fixed count of them. Tags are "synthetic-<i>".
class SyntheticFrameSource final : public FrameSource {
public:
    SyntheticFrameSource(std::size_t frame_count, int width, int height,
                         std::uint64_t seed);

    std::optional<Frame> next() override;

private:
    std::size_t frame_count_;
    int width_;
    int height_;
    std::uint64_t seed_;
    std::size_t emitted_ = 0;
};

// Per-face outcome within a frame. `error` is empty on success; when the
// provider fails on one face the message lands here and the rest of the
// frame is unaffected. `match` is empty for an empty gallery (NoMatch) and
// for error entries. `label` is the rendered tag: the matched record's name
// when accepted, otherwise "unknown(best_id, distance)" — a rejected face is
// never labeled with the best name.
struct FaceOutcome {
    FaceBox box;
    std::optional<MatchResult> match;
    std::string label;
    std::string error;
};

struct FrameTimings {
    double detect_ms = 0.0;
    double embed_ms = 0.0;
    double search_ms = 0.0;
    double total_ms = 0.0;
};

struct FrameReport {
    std::string source_tag;
    std::vector<FaceOutcome> faces;
    FrameTimings timings;
    std::string frame_error;  // set when the frame itself failed to decode
};

struct RunSummary {
    std::uint64_t frames = 0;
    std::uint64_t faces = 0;
    std::uint64_t accepted = 0;
    double p50_ms = 0.0;
    double p95_ms = 0.0;
    double max_ms = 0.0;
    bool complete = true;
};

// Detect, embed, and search one frame. One outcome per detected face, in
// provider detection order. Timings come from a monotonic clock.
FrameReport process_frame(const Frame& frame, const EmbedProvider& provider,
                          const GallerySnapshot& snapshot, const SearchConfig& config);

using ReportSink = std::function<void(const FrameReport&)>;

// Drives the frame loop: one report per frame, in stream order, delivered to
// the sink on the calling thread. The snapshot is fixed for the whole run.
// Latency percentiles (nearest-rank) cover successfully decoded frames.
RunSummary run(FrameSource& source, const EmbedProvider& provider,
               const GallerySnapshot& snapshot, const SearchConfig& config,
               const ReportSink& sink);

// JSON-lines serialization of one report. Arrays are parallel, one entry per
// face: boxes, ids, distances, accepted, errors. A NoMatch or error entry
// has null id/distance and accepted=false. Keys appear in a fixed order so
// reports from runs that differ only in speed diff cleanly once "timings"
// is dropped.
nlohmann::ordered_json frame_report_json(const FrameReport& report);

}  // namespace facetag

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "facetag/types.hpp"

namespace facetag {

// Face bounding box: (x, y) is the top-left corner, in pixels.
struct FaceBox {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
    double confidence = 1.0;

    friend bool operator==(const FaceBox&, const FaceBox&) = default;
};

// One decoded video/image frame, 8-bit RGB, row-major.
struct Frame {
    Frame(int w, int h, std::vector<std::uint8_t> px, std::string tag);

    int width;
    int height;
    std::vector<std::uint8_t> pixels;  // width * height * 3
    std::string source_tag;            // filename or stream position
};

// Detection + embedding backend. Implementations are stateless after
// construction and safe to call from multiple threads.
//
// detect returns boxes sorted by descending confidence, ties by (y, then x),
// clamped to the frame. embed always returns an Embedding of dimension dim().
class EmbedProvider {
public:
    virtual ~EmbedProvider() = default;

    virtual std::size_t dim() const = 0;
    virtual std::vector<FaceBox> detect(const Frame& frame) const = 0;
    virtual Embedding embed(const Frame& frame, const FaceBox& box) const = 0;
};

// Deterministic desk-scale provider, standing in for the neural detector and
// embedder. Detection is driven by sidecar annotation files; embeddings are
// content-addressed: the crop bytes are hashed (FNV-1a 64, seeded) and the
// hash seeds a splitmix64 stream of dim values uniform in [-1, 1). Identical
// crop bytes therefore produce identical embeddings on every platform, which
// makes enroll-then-identify round trips land at distance exactly 0.
class MockProvider final : public EmbedProvider {
public:
    explicit MockProvider(std::size_t dim = kDefaultDim, std::uint64_t seed = 0)
        : dim_(dim), seed_(seed) {}

    std::size_t dim() const override { return dim_; }
    std::vector<FaceBox> detect(const Frame& frame) const override;
    Embedding embed(const Frame& frame, const FaceBox& box) const override;

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

// Sidecar annotation path for an image: the extension replaced by ".faces".
std::filesystem::path sidecar_path_for(const std::filesystem::path& image_path);

// Parses a sidecar file: one face per line, "x y width height confidence",
// '#' starts a comment. Returns boxes in file order, unclamped and unsorted.
// A missing file yields an empty list; a malformed line throws ProviderError.
std::vector<FaceBox> read_face_sidecar(const std::filesystem::path& path);

// Clamps the box to the frame. The result may have zero area.
FaceBox clamp_to_frame(const FaceBox& box, const Frame& frame);

}  // namespace facetag

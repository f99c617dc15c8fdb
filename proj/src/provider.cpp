// SPDX-License-Identifier: Apache-2.0
#include "facetag/provider.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "facetag/rng.hpp"

namespace facetag {

Frame::Frame(int w, int h, std::vector<std::uint8_t> px, std::string tag)
    : width(w), height(h), pixels(std::move(px)), source_tag(std::move(tag)) {
    if (width <= 0 || height <= 0) throw Error("frame dimensions must be positive");
    const std::size_t expected =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
    if (pixels.size() != expected)
        throw Error("frame pixel buffer has " + std::to_string(pixels.size()) +
                    " bytes, expected " + std::to_string(expected));
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& image_path) {
    std::filesystem::path p = image_path;
    p.replace_extension(".faces");
    return p;
}

std::vector<FaceBox> read_face_sidecar(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) return {};  // no sidecar means no faces

    std::vector<FaceBox> boxes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        std::istringstream in(line);
        FaceBox box;
        if (!(in >> box.x >> box.y >> box.width >> box.height >> box.confidence))
            throw ProviderError("malformed face line " + std::to_string(line_no) +
                                " in " + path.string());
        std::string rest;
        if (in >> rest)
            throw ProviderError("trailing tokens on face line " + std::to_string(line_no) +
                                " in " + path.string());
        if (box.width <= 0 || box.height <= 0)
            throw ProviderError("non-positive box size on line " + std::to_string(line_no) +
                                " in " + path.string());
        if (!(box.confidence >= 0.0 && box.confidence <= 1.0))
            throw ProviderError("confidence outside [0,1] on line " +
                                std::to_string(line_no) + " in " + path.string());
        boxes.push_back(box);
    }
    return boxes;
}

FaceBox clamp_to_frame(const FaceBox& box, const Frame& frame) {
    FaceBox c = box;
    const int x0 = std::clamp(box.x, 0, frame.width);
    const int y0 = std::clamp(box.y, 0, frame.height);
    const int x1 = std::clamp(box.x + box.width, 0, frame.width);
    const int y1 = std::clamp(box.y + box.height, 0, frame.height);
    c.x = x0;
    c.y = y0;
    c.width = std::max(0, x1 - x0);
    c.height = std::max(0, y1 - y0);
    return c;
}

std::vector<FaceBox> MockProvider::detect(const Frame& frame) const {
    std::vector<FaceBox> boxes = read_face_sidecar(sidecar_path_for(frame.source_tag));
    for (FaceBox& box : boxes) box = clamp_to_frame(box, frame);
    std::stable_sort(boxes.begin(), boxes.end(), [](const FaceBox& a, const FaceBox& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    return boxes;
}

Embedding MockProvider::embed(const Frame& frame, const FaceBox& box) const {
    const FaceBox c = clamp_to_frame(box, frame);
    if (c.width <= 0 || c.height <= 0)
        throw ProviderError("degenerate crop after clamping in " + frame.source_tag);

    // Gather the crop rows into one contiguous buffer; the embedding is a
    // pure function of these bytes (and the provider seed), nothing else.
    std::vector<std::uint8_t> crop;
    crop.reserve(static_cast<std::size_t>(c.width) * c.height * 3);
    for (int row = c.y; row < c.y + c.height; ++row) {
        const std::uint8_t* src =
            frame.pixels.data() +
            (static_cast<std::size_t>(row) * frame.width + c.x) * 3;
        crop.insert(crop.end(), src, src + static_cast<std::size_t>(c.width) * 3);
    }

    SplitMix64 rng(fnv1a64(crop.data(), crop.size(), seed_));
    Vec values(static_cast<Eigen::Index>(dim_));
    fill_uniform(values.data(), dim_, rng);
    return Embedding(std::move(values));
}

}  // namespace facetag

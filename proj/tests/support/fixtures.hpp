// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared test fixtures: temp directories, PPM/PNG/sidecar writers, and
// seeded pixel noise. The PNG writer is an independent encoder (zlib
// compress + filter-0 rows) used as the decode oracle.

#include <zlib.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "facetag/provider.hpp"
#include "facetag/rng.hpp"

namespace fixtures {

class TempDir {
public:
    explicit TempDir(const std::string& label = "facetag-test") {
        const auto base = std::filesystem::temp_directory_path();
        static std::atomic<unsigned> counter{0};
        std::random_device rd;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / (label + "-" + std::to_string(rd()) + "-" +
                                     std::to_string(counter.fetch_add(1)));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp directory");
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::vector<std::uint8_t> noise_pixels(int width, int height, std::uint64_t seed) {
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * 3);
    facetag::SplitMix64 rng(seed);
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = static_cast<std::uint8_t>(rng.next() & 0xFF);
    return pixels;
}

inline void write_ppm(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint8_t>& pixels) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "P6\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
}

inline void write_sidecar(const std::filesystem::path& image_path,
                          const std::vector<facetag::FaceBox>& boxes) {
    std::ofstream out(facetag::sidecar_path_for(image_path), std::ios::trunc);
    out << "# test sidecar\n";
    for (const auto& b : boxes)
        out << b.x << " " << b.y << " " << b.width << " " << b.height << " "
            << b.confidence << "\n";
}

// Minimal independent PNG encoder: 8-bit, color type from channel count
// (1 gray, 2 gray+alpha, 3 RGB, 4 RGBA), filter 0 on every row.
inline void write_png(const std::filesystem::path& path, int width, int height,
                      int channels, const std::vector<std::uint8_t>& samples) {
    auto chunk = [](std::string& out, const char type[4], const std::string& payload) {
        const auto len = static_cast<std::uint32_t>(payload.size());
        for (int i = 3; i >= 0; --i) out.push_back(static_cast<char>((len >> (8 * i)) & 0xFF));
        const std::size_t type_at = out.size();
        out.append(type, 4);
        out.append(payload);
        const auto crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(out.data() + type_at), 4 + len));
        for (int i = 3; i >= 0; --i) out.push_back(static_cast<char>((crc >> (8 * i)) & 0xFF));
    };

    std::string ihdr;
    auto be32 = [&](std::string& s, std::uint32_t v) {
        for (int i = 3; i >= 0; --i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    };
    be32(ihdr, static_cast<std::uint32_t>(width));
    be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    const int color_type = channels == 1 ? 0 : channels == 2 ? 4 : channels == 3 ? 2 : 6;
    ihdr.push_back(static_cast<char>(color_type));
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace

    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::string raw;
    raw.reserve((stride + 1) * height);
    for (int row = 0; row < height; ++row) {
        raw.push_back(0);  // filter type None
        raw.append(reinterpret_cast<const char*>(samples.data() + row * stride), stride);
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(bound, '\0');
    compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
              reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
              Z_BEST_SPEED);
    compressed.resize(bound);

    std::string file;
    const std::uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    file.append(reinterpret_cast<const char*>(sig), 8);
    chunk(file, "IHDR", ihdr);
    chunk(file, "IDAT", compressed);
    chunk(file, "IEND", "");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(file.data(), static_cast<std::streamsize>(file.size()));
}

}  // namespace fixtures

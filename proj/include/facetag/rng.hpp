// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic, platform-independent randomness. Everything seeded in this
// project (synthetic galleries, probes, mock embeddings) flows through these
// primitives so results are reproducible bit-for-bit across runs and machines.

#include <cstddef>
#include <cstdint>

namespace facetag {

// splitmix64 (Steele/Lea/Flood). Full 2^64 period, any seed is valid.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Maps 64 random bits to a float in [-1, 1). The top 53 bits become a double
// in [0, 1) first, so the mapping is exact IEEE-754 arithmetic everywhere.
inline float unit_symmetric(std::uint64_t bits) noexcept {
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    return static_cast<float>(2.0 * u - 1.0);
}

inline void fill_uniform(float* dst, std::size_t n, SplitMix64& rng) noexcept {
    for (std::size_t i = 0; i < n; ++i) dst[i] = unit_symmetric(rng.next());
}

// FNV-1a 64-bit over (seed bytes little-endian, then data). Offset basis
// 0xcbf29ce484222325, prime 0x100000001b3.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t seed = 0) noexcept {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < 8; ++i) {
        h ^= static_cast<unsigned char>(seed >> (8 * i));
        h *= 0x100000001b3ULL;
    }
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace facetag

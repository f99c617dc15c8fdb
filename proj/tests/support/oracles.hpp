// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference implementations used as test oracles. These
// deliberately share no code with the library: distances accumulate in
// extended precision with exact double-width differences, and the
// nearest-neighbor search is a naive double loop.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracles {

inline long double distance(const std::vector<float>& a, const std::vector<float>& b) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double d =
            static_cast<long double>(static_cast<double>(a[i]) - static_cast<double>(b[i]));
        acc += d * d;
    }
    return sqrtl(acc);
}

struct Nearest {
    std::size_t index = 0;
    long double distance = 0.0L;
};

// Naive scan, first strictly-smaller distance wins (lowest index on ties).
inline Nearest nearest(const std::vector<std::vector<float>>& gallery,
                       const std::vector<float>& probe) {
    Nearest best;
    bool have = false;
    for (std::size_t i = 0; i < gallery.size(); ++i) {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < probe.size(); ++j) {
            const long double d = static_cast<long double>(
                static_cast<double>(gallery[i][j]) - static_cast<double>(probe[j]));
            acc += d * d;
        }
        const long double dist = sqrtl(acc);
        if (!have || dist < best.distance) {
            best.index = i;
            best.distance = dist;
            have = true;
        }
    }
    return best;
}

// Reference FNV-1a 64 over (8 seed bytes little-endian, then data), written
// out longhand.
inline std::uint64_t ref_fnv1a64(const unsigned char* data, std::size_t len,
                                 std::uint64_t seed) {
    const std::uint64_t prime = 1099511628211ULL;        // 0x100000001b3
    std::uint64_t hash = 14695981039346656037ULL;        // offset basis
    for (int i = 0; i < 8; ++i) {
        hash = (hash ^ ((seed >> (8 * i)) & 0xFFu)) * prime;
    }
    for (std::size_t i = 0; i < len; ++i) {
        hash = (hash ^ data[i]) * prime;
    }
    return hash;
}

// Reference splitmix64 step.
inline std::uint64_t ref_splitmix64(std::uint64_t& state) {
    state = state + 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z = z ^ (z >> 31);
    return z;
}

// Reference bits -> [-1, 1) mapping.
inline float ref_unit_symmetric(std::uint64_t bits) {
    const double unit = static_cast<double>(bits >> 11) / 9007199254740992.0;  // 2^53
    return static_cast<float>(unit * 2.0 - 1.0);
}

}  // namespace oracles

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "facetag/errors.hpp"
#include "facetag/types.hpp"

namespace facetag {

namespace detail {

// Sum of squared differences. Subtraction in f32 (the storage precision),
// accumulation in f64, strictly ascending index order. Every distance in the
// project goes through this one kernel, which is what makes sequential and
// parallel searches bit-identical: a record's distance depends only on its
// bytes and the probe's, never on which thread computes it.
inline double sum_squared_diff(const float* a, const float* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const float d = a[i] - b[i];
        acc += static_cast<double>(d) * static_cast<double>(d);
    }
    return acc;
}

}  // namespace detail

inline double euclidean_distance(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw DimensionError(a.size(), b.size(), "euclidean_distance");
    return std::sqrt(detail::sum_squared_diff(a.data(), b.data(), a.size()));
}

inline double euclidean_distance(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim(), "euclidean_distance");
    return std::sqrt(detail::sum_squared_diff(a.data(), b.data(), a.dim()));
}

// Inclusive comparison: an exact duplicate matches even at threshold 0.
// Callers must pass finite, non-negative values.
inline bool is_match(double distance, double threshold) noexcept {
    return distance <= threshold;
}

}  // namespace facetag

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "facetag/errors.hpp"
#include "facetag/rng.hpp"

namespace facetag {

inline constexpr std::size_t kDefaultDim = 128;
inline constexpr double kDefaultThreshold = 0.6;
inline constexpr std::size_t kDefaultMinChunk = 1024;

using Vec = Eigen::VectorXf;
using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowsMap = Eigen::Map<const RowMatrixF>;

// Fixed-dimension embedding vector. Elements are stored as 32-bit floats and
// are guaranteed finite by construction.
class Embedding {
public:
    explicit Embedding(Vec values) : values_(std::move(values)) {
        if (values_.size() == 0) throw Error("embedding must be non-empty");
        for (Eigen::Index i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw Error("embedding element " + std::to_string(i) + " is not finite");
        }
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.size()); }
    const Vec& values() const noexcept { return values_; }
    const float* data() const noexcept { return values_.data(); }
    float operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

    friend bool operator==(const Embedding& a, const Embedding& b) {
        return a.values_.size() == b.values_.size() && a.values_ == b.values_;
    }

private:
    Vec values_;
};

// One dim-length draw from the uniform [-1, 1) generator.
inline Embedding random_embedding(std::size_t dim, SplitMix64& rng) {
    Vec v(static_cast<Eigen::Index>(dim));
    fill_uniform(v.data(), dim, rng);
    return Embedding(std::move(v));
}

// One gallery row: a stable identifier, a display name, and the embedding.
// Several records may share an id (multiple enrollment photos per person).
struct IdentityRecord {
    IdentityRecord(std::string id_, std::string name_, Embedding embedding_)
        : id(std::move(id_)), name(std::move(name_)), embedding(std::move(embedding_)) {
        if (id.empty()) throw Error("record id must be non-empty");
        for (unsigned char c : id) {
            if (c < 0x20 || c == 0x7F)
                throw Error("record id contains a control character");
        }
    }

    std::string id;
    std::string name;
    Embedding embedding;
};

inline bool operator==(const IdentityRecord& a, const IdentityRecord& b) {
    return a.id == b.id && a.name == b.name && a.embedding == b.embedding;
}

// Best match found by a search, plus the accept/reject verdict against the
// threshold the search ran with.
struct MatchResult {
    std::size_t best_index = 0;
    std::string best_id;
    double distance = 0.0;
    bool accepted = false;
};

inline bool operator==(const MatchResult& a, const MatchResult& b) {
    return a.best_index == b.best_index && a.best_id == b.best_id &&
           a.distance == b.distance && a.accepted == b.accepted;
}

struct SearchConfig {
    double threshold = kDefaultThreshold;   // euclidean distance units
    unsigned workers = 1;
    std::size_t min_chunk = kDefaultMinChunk;  // smallest per-worker slice

    void validate() const {
        if (workers < 1) throw Error("search config: workers must be >= 1");
        if (min_chunk < 1) throw Error("search config: min_chunk must be >= 1");
        if (!(threshold >= 0.0) || !std::isfinite(threshold))
            throw Error("search config: threshold must be finite and >= 0");
    }
};

}  // namespace facetag

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "facetag/types.hpp"

namespace facetag {

class EmbedProvider;

// Immutable view of a gallery taken at a point in time. Snapshots are cheap
// to copy (shared ownership) and safe to share across threads; searches only
// ever run against snapshots, so concurrent enrollment cannot perturb them.
//
// Embeddings are exposed as one contiguous row-major N x dim float block so
// the search hot loop is pure streaming arithmetic.
class GallerySnapshot {
public:
    static GallerySnapshot from_parts(std::size_t dim, std::vector<std::string> ids,
                                      std::vector<std::string> names,
                                      std::vector<float> flat, std::uint64_t version = 0);

    std::size_t dim() const noexcept { return data_->dim; }
    std::size_t size() const noexcept { return data_->ids.size(); }
    std::uint64_t version() const noexcept { return data_->version; }

    const std::string& id(std::size_t i) const { return data_->ids[i]; }
    const std::string& name(std::size_t i) const { return data_->names[i]; }
    const float* row(std::size_t i) const { return data_->flat.data() + i * data_->dim; }

    ConstRowsMap embeddings() const {
        return ConstRowsMap(data_->flat.data(), static_cast<Eigen::Index>(size()),
                            static_cast<Eigen::Index>(dim()));
    }

    IdentityRecord record(std::size_t i) const;

private:
    struct Data {
        std::size_t dim;
        std::uint64_t version;
        std::vector<std::string> ids;
        std::vector<std::string> names;
        std::vector<float> flat;
    };

    explicit GallerySnapshot(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
    friend class Gallery;
};

// Ordered, persistable collection of identity records. Single-writer:
// enroll/remove/save need exclusive access. Enrollment order is stable and
// survives save/load.
class Gallery {
public:
    explicit Gallery(std::size_t dim = kDefaultDim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ids_.size(); }
    std::uint64_t version() const noexcept { return version_; }

    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    const float* row(std::size_t i) const { return flat_.data() + i * dim_; }
    IdentityRecord record(std::size_t i) const;

    // Appends the record and returns the new snapshot version.
    std::uint64_t enroll(const IdentityRecord& rec);

    // Removes every record with the given id, preserving the relative order
    // of survivors. Returns how many were removed; the version only bumps
    // when that count is non-zero.
    std::size_t remove_by_id(std::string_view id);

    GallerySnapshot snapshot() const;

    // EMBG on-disk format, byte-deterministic. Returns bytes written.
    std::uint64_t save(const std::filesystem::path& path) const;
    static Gallery load(const std::filesystem::path& path);

private:
    std::size_t dim_;
    std::uint64_t version_ = 0;
    std::vector<std::string> ids_;
    std::vector<std::string> names_;
    std::vector<float> flat_;  // size() * dim_, row-major
};

using WarnFn = std::function<void(const std::string&)>;

// Enrolls every face the provider detects in every image under dir, in
// lexicographic filename order. The record id is the filename stem up to the
// first underscore ("alice_01.png" -> "alice"); the name keeps the full stem.
// Unreadable or undecodable files are reported through warn and skipped;
// images with no faces are skipped silently. Returns the number enrolled.
std::size_t append_from_directory(Gallery& gallery, const std::filesystem::path& dir,
                                  const EmbedProvider& provider, const WarnFn& warn = {});

Gallery build_from_directory(const std::filesystem::path& dir,
                             const EmbedProvider& provider, const WarnFn& warn = {});

}  // namespace facetag

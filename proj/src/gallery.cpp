// SPDX-License-Identifier: Apache-2.0
#include "facetag/gallery.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>

#include "facetag/image_io.hpp"
#include "facetag/provider.hpp"

namespace facetag {

namespace {

// EMBG format, all integers little-endian:
//   bytes 0-3   magic "EMBG"
//   bytes 4-5   format version (u16) = 1
//   bytes 6-7   dim (u16)
//   bytes 8-15  record count (u64)
//   per record: id length (u16), id bytes (UTF-8),
//               name length (u16), name bytes (UTF-8),
//               dim x f32 embedding elements
// No padding, no trailing bytes.

constexpr char kMagic[4] = {'E', 'M', 'B', 'G'};
constexpr std::uint16_t kFormatVersion = 1;

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

// Bounds-checked little-endian reader over an in-memory file image.
class Reader {
public:
    Reader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint64_t offset() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }

    void need(std::size_t n, const char* what) const {
        if (size_ - pos_ < n)
            throw FormatError(pos_, std::string("truncated while reading ") + what);
    }

    std::uint16_t u16(const char* what) {
        need(2, what);
        const std::uint16_t v = static_cast<std::uint16_t>(data_[pos_]) |
                                static_cast<std::uint16_t>(data_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }

    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    float f32(const char* what) {
        need(4, what);
        std::uint32_t bits = 0;
        for (int i = 0; i < 4; ++i)
            bits |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return std::bit_cast<float>(bits);
    }

    std::string bytes(std::size_t n, const char* what) {
        need(n, what);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }

private:
    const unsigned char* data_;
    std::size_t size_;
    std::uint64_t pos_ = 0;
};

}  // namespace

GallerySnapshot GallerySnapshot::from_parts(std::size_t dim, std::vector<std::string> ids,
                                            std::vector<std::string> names,
                                            std::vector<float> flat,
                                            std::uint64_t version) {
    if (dim == 0) throw Error("snapshot dim must be positive");
    if (names.size() != ids.size() || flat.size() != ids.size() * dim)
        throw Error("snapshot parts have inconsistent sizes");
    for (float v : flat)
        if (!std::isfinite(v)) throw Error("snapshot embedding element is not finite");

    auto data = std::make_shared<Data>();
    data->dim = dim;
    data->version = version;
    data->ids = std::move(ids);
    data->names = std::move(names);
    data->flat = std::move(flat);
    return GallerySnapshot(std::move(data));
}

IdentityRecord GallerySnapshot::record(std::size_t i) const {
    Vec v(static_cast<Eigen::Index>(dim()));
    std::memcpy(v.data(), row(i), dim() * sizeof(float));
    return IdentityRecord(id(i), name(i), Embedding(std::move(v)));
}

Gallery::Gallery(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw Error("gallery dim must be positive");
    if (dim_ > std::numeric_limits<std::uint16_t>::max())
        throw Error("gallery dim exceeds the file format limit (65535)");
}

IdentityRecord Gallery::record(std::size_t i) const {
    Vec v(static_cast<Eigen::Index>(dim_));
    std::memcpy(v.data(), row(i), dim_ * sizeof(float));
    return IdentityRecord(ids_[i], names_[i], Embedding(std::move(v)));
}

std::uint64_t Gallery::enroll(const IdentityRecord& rec) {
    if (rec.embedding.dim() != dim_)
        throw DimensionError(dim_, rec.embedding.dim(), "enroll");
    ids_.push_back(rec.id);
    names_.push_back(rec.name);
    flat_.insert(flat_.end(), rec.embedding.data(), rec.embedding.data() + dim_);
    return ++version_;
}

std::size_t Gallery::remove_by_id(std::string_view id) {
    std::size_t removed = 0;
    std::size_t write = 0;
    for (std::size_t read = 0; read < ids_.size(); ++read) {
        if (ids_[read] == id) {
            ++removed;
            continue;
        }
        if (write != read) {
            ids_[write] = std::move(ids_[read]);
            names_[write] = std::move(names_[read]);
            std::memmove(flat_.data() + write * dim_, flat_.data() + read * dim_,
                         dim_ * sizeof(float));
        }
        ++write;
    }
    if (removed > 0) {
        ids_.resize(write);
        names_.resize(write);
        flat_.resize(write * dim_);
        ++version_;
    }
    return removed;
}

GallerySnapshot Gallery::snapshot() const {
    auto data = std::make_shared<GallerySnapshot::Data>();
    data->dim = dim_;
    data->version = version_;
    data->ids = ids_;
    data->names = names_;
    data->flat = flat_;
    return GallerySnapshot(std::move(data));
}

std::uint64_t Gallery::save(const std::filesystem::path& path) const {
    std::string out;
    out.reserve(16 + size() * (4 + dim_ * 4 + 16));
    out.append(kMagic, 4);
    put_u16(out, kFormatVersion);
    put_u16(out, static_cast<std::uint16_t>(dim_));
    put_u64(out, size());

    const auto max_len = std::numeric_limits<std::uint16_t>::max();
    for (std::size_t i = 0; i < size(); ++i) {
        if (ids_[i].size() > max_len || names_[i].size() > max_len)
            throw FormatError(out.size(), "id or name longer than 65535 bytes");
        put_u16(out, static_cast<std::uint16_t>(ids_[i].size()));
        out.append(ids_[i]);
        put_u16(out, static_cast<std::uint16_t>(names_[i].size()));
        out.append(names_[i]);
        const float* r = row(i);
        for (std::size_t j = 0; j < dim_; ++j) put_f32(out, r[j]);
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(path.string(), "cannot open for writing");
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    file.flush();
    if (!file) throw IoError(path.string(), "write failed");
    return out.size();
}

Gallery Gallery::load(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError(path.string(), "cannot open for reading");
    std::string blob((std::istreambuf_iterator<char>(file)),
                     std::istreambuf_iterator<char>());
    if (file.bad()) throw IoError(path.string(), "read failed");

    Reader r(reinterpret_cast<const unsigned char*>(blob.data()), blob.size());
    const std::string magic = r.bytes(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw FormatError(0, "bad magic (not an EMBG file)");
    const std::uint16_t version = r.u16("format version");
    if (version != kFormatVersion)
        throw FormatError(4, "unsupported format version " + std::to_string(version));
    const std::uint16_t dim = r.u16("dim");
    if (dim == 0) throw FormatError(6, "dim must be positive");
    const std::uint64_t count = r.u64("record count");

    Gallery g(dim);
    // Reserve from the bytes actually present, not the header's claim, so a
    // corrupt count cannot trigger a huge allocation before the truncation
    // check fires.
    const std::uint64_t plausible =
        std::min<std::uint64_t>(count, r.remaining() / (4 + std::size_t{dim} * 4) + 1);
    g.ids_.reserve(plausible);
    g.names_.reserve(plausible);
    g.flat_.reserve(plausible * dim);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint16_t id_len = r.u16("id length");
        const std::uint64_t id_at = r.offset();
        std::string id = r.bytes(id_len, "id");
        if (id.empty()) throw FormatError(id_at, "empty record id");
        for (unsigned char c : id) {
            if (c < 0x20 || c == 0x7F)
                throw FormatError(id_at, "control character in record id");
        }
        const std::uint16_t name_len = r.u16("name length");
        std::string name = r.bytes(name_len, "name");
        for (std::uint16_t j = 0; j < dim; ++j) {
            const std::uint64_t at = r.offset();
            const float v = r.f32("embedding element");
            if (!std::isfinite(v))
                throw FormatError(at, "non-finite embedding element");
            g.flat_.push_back(v);
        }
        g.ids_.push_back(std::move(id));
        g.names_.push_back(std::move(name));
    }
    if (r.remaining() != 0)
        throw FormatError(r.offset(),
                          std::to_string(r.remaining()) + " trailing bytes after records");
    g.version_ = 0;
    return g;
}

namespace {

std::string stem_up_to_underscore(const std::filesystem::path& path) {
    const std::string stem = path.stem().string();
    const auto cut = stem.find('_');
    return cut == std::string::npos ? stem : stem.substr(0, cut);
}

}  // namespace

std::size_t append_from_directory(Gallery& gallery, const std::filesystem::path& dir,
                                  const EmbedProvider& provider, const WarnFn& warn) {
    if (provider.dim() != gallery.dim())
        throw DimensionError(gallery.dim(), provider.dim(), "append_from_directory");

    std::error_code ec;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) throw IoError(dir.string(), ec.message());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : it) {
        if (entry.is_regular_file() && has_image_extension(entry.path()))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });

    std::size_t enrolled = 0;
    for (const auto& path : files) {
        std::optional<Frame> frame;
        try {
            frame.emplace(load_frame(path));
        } catch (const Error& e) {
            if (warn) warn("skipping " + path.string() + ": " + e.what());
            continue;
        }

        const std::string id = stem_up_to_underscore(path);
        const std::string name = path.stem().string();
        for (const FaceBox& box : provider.detect(*frame)) {
            try {
                gallery.enroll(IdentityRecord(id, name, provider.embed(*frame, box)));
                ++enrolled;
            } catch (const Error& e) {
                if (warn) warn("skipping face in " + path.string() + ": " + e.what());
            }
        }
    }
    return enrolled;
}

Gallery build_from_directory(const std::filesystem::path& dir,
                             const EmbedProvider& provider, const WarnFn& warn) {
    Gallery gallery(provider.dim());
    append_from_directory(gallery, dir, provider, warn);
    return gallery;
}

}  // namespace facetag

// SPDX-License-Identifier: Apache-2.0
#include "facetag/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "facetag/errors.hpp"

namespace facetag {

namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 28;  // decode size sanity cap

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError(path.string(), "cannot open for reading");
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(file)),
                                   std::istreambuf_iterator<char>());
    if (file.bad()) throw IoError(path.string(), "read failed");
    return data;
}

// ---------------------------------------------------------------- PPM (P6)

bool is_ppm_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Skips whitespace and '#' comments between header tokens.
std::size_t skip_ppm_separators(const std::vector<std::uint8_t>& d, std::size_t pos) {
    while (pos < d.size()) {
        if (is_ppm_space(d[pos])) {
            ++pos;
        } else if (d[pos] == '#') {
            while (pos < d.size() && d[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    return pos;
}

long parse_ppm_int(const std::vector<std::uint8_t>& d, std::size_t& pos,
                   const std::string& tag, const char* what) {
    pos = skip_ppm_separators(d, pos);
    if (pos >= d.size() || !std::isdigit(d[pos]))
        throw DecodeError(tag, std::string("ppm: expected ") + what);
    long value = 0;
    while (pos < d.size() && std::isdigit(d[pos])) {
        value = value * 10 + (d[pos] - '0');
        if (value > 1'000'000'000L) throw DecodeError(tag, std::string(what) + " too large");
        ++pos;
    }
    return value;
}

Frame decode_ppm(const std::vector<std::uint8_t>& d, const std::string& tag) {
    std::size_t pos = 2;  // past "P6"
    const long width = parse_ppm_int(d, pos, tag, "width");
    const long height = parse_ppm_int(d, pos, tag, "height");
    const long maxval = parse_ppm_int(d, pos, tag, "maxval");
    if (width <= 0 || height <= 0) throw DecodeError(tag, "ppm: non-positive dimensions");
    if (maxval <= 0 || maxval > 255)
        throw DecodeError(tag, "ppm: unsupported maxval " + std::to_string(maxval));
    if (pos >= d.size() || !is_ppm_space(d[pos]))
        throw DecodeError(tag, "ppm: missing separator before raster");
    ++pos;  // exactly one whitespace byte before the raster

    const std::size_t n_pixels = static_cast<std::size_t>(width) * height;
    if (n_pixels > kMaxPixels) throw DecodeError(tag, "image too large");
    const std::size_t need = n_pixels * 3;
    if (d.size() - pos < need) throw DecodeError(tag, "ppm: truncated raster");

    std::vector<std::uint8_t> pixels(d.begin() + static_cast<std::ptrdiff_t>(pos),
                                     d.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return Frame(static_cast<int>(width), static_cast<int>(height), std::move(pixels), tag);
}

// -------------------------------------------------------------------- PNG

constexpr std::uint8_t kPngSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

std::uint32_t be32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
           static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

std::uint8_t paeth(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
    const int p = int(a) + int(b) - int(c);
    const int pa = std::abs(p - int(a));
    const int pb = std::abs(p - int(b));
    const int pc = std::abs(p - int(c));
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

Frame decode_png(const std::vector<std::uint8_t>& d, const std::string& tag) {
    std::size_t pos = 8;  // past signature

    std::uint32_t width = 0, height = 0;
    int channels = 0;
    bool seen_ihdr = false, seen_iend = false;
    std::vector<std::uint8_t> idat;

    while (pos + 8 <= d.size() && !seen_iend) {
        const std::uint32_t len = be32(d.data() + pos);
        if (pos + 12 + static_cast<std::size_t>(len) > d.size())
            throw DecodeError(tag, "png: truncated chunk");
        const char* type = reinterpret_cast<const char*>(d.data() + pos + 4);
        const std::uint8_t* payload = d.data() + pos + 8;

        const std::uint32_t expect_crc = be32(payload + len);
        const auto actual_crc = static_cast<std::uint32_t>(
            crc32(crc32(0L, d.data() + pos + 4, 4), payload, len));
        if (expect_crc != actual_crc)
            throw DecodeError(tag, std::string("png: bad CRC in ") + std::string(type, 4));

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw DecodeError(tag, "png: bad IHDR length");
            width = be32(payload);
            height = be32(payload + 4);
            const int bit_depth = payload[8];
            const int color_type = payload[9];
            const int interlace = payload[12];
            if (payload[10] != 0 || payload[11] != 0)
                throw DecodeError(tag, "png: unknown compression/filter method");
            if (bit_depth != 8)
                throw DecodeError(tag, "png: only 8-bit depth supported");
            if (interlace != 0)
                throw DecodeError(tag, "png: interlaced images not supported");
            switch (color_type) {
                case 0: channels = 1; break;
                case 2: channels = 3; break;
                case 4: channels = 2; break;
                case 6: channels = 4; break;
                default:
                    throw DecodeError(tag, "png: unsupported color type " +
                                               std::to_string(color_type));
            }
            seen_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            if (!seen_ihdr) throw DecodeError(tag, "png: IDAT before IHDR");
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            seen_iend = true;
        }
        // Ancillary chunks are skipped.
        pos += 12 + static_cast<std::size_t>(len);
    }

    if (!seen_ihdr) throw DecodeError(tag, "png: missing IHDR");
    if (!seen_iend) throw DecodeError(tag, "png: missing IEND");
    if (width == 0 || height == 0) throw DecodeError(tag, "png: zero dimensions");
    const std::size_t n_pixels = static_cast<std::size_t>(width) * height;
    if (n_pixels > kMaxPixels) throw DecodeError(tag, "image too large");

    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    const std::size_t raw_size = (stride + 1) * height;
    std::vector<std::uint8_t> raw(raw_size);
    uLongf dest_len = raw_size;
    const int rc = uncompress(raw.data(), &dest_len, idat.data(),
                              static_cast<uLong>(idat.size()));
    if (rc != Z_OK || dest_len != raw_size)
        throw DecodeError(tag, "png: inflate failed or wrong data size");

    // Undo the per-row filter in place, then convert to RGB.
    std::vector<std::uint8_t> image(stride * height);
    const int bpp = channels;
    for (std::size_t row = 0; row < height; ++row) {
        const std::uint8_t filter = raw[row * (stride + 1)];
        const std::uint8_t* src = raw.data() + row * (stride + 1) + 1;
        std::uint8_t* dst = image.data() + row * stride;
        const std::uint8_t* prev = row > 0 ? image.data() + (row - 1) * stride : nullptr;
        for (std::size_t i = 0; i < stride; ++i) {
            const std::uint8_t left = i >= static_cast<std::size_t>(bpp) ? dst[i - bpp] : 0;
            const std::uint8_t up = prev ? prev[i] : 0;
            const std::uint8_t up_left =
                (prev && i >= static_cast<std::size_t>(bpp)) ? prev[i - bpp] : 0;
            switch (filter) {
                case 0: dst[i] = src[i]; break;
                case 1: dst[i] = static_cast<std::uint8_t>(src[i] + left); break;
                case 2: dst[i] = static_cast<std::uint8_t>(src[i] + up); break;
                case 3:
                    dst[i] = static_cast<std::uint8_t>(src[i] + ((left + up) >> 1));
                    break;
                case 4:
                    dst[i] = static_cast<std::uint8_t>(src[i] + paeth(left, up, up_left));
                    break;
                default:
                    throw DecodeError(tag, "png: unknown filter type " +
                                               std::to_string(filter));
            }
        }
    }

    std::vector<std::uint8_t> rgb(n_pixels * 3);
    for (std::size_t p = 0; p < n_pixels; ++p) {
        const std::uint8_t* px = image.data() + p * channels;
        switch (channels) {
            case 1: rgb[p * 3] = rgb[p * 3 + 1] = rgb[p * 3 + 2] = px[0]; break;
            case 2: rgb[p * 3] = rgb[p * 3 + 1] = rgb[p * 3 + 2] = px[0]; break;
            case 3: std::memcpy(rgb.data() + p * 3, px, 3); break;
            case 4: std::memcpy(rgb.data() + p * 3, px, 3); break;  // drop alpha
        }
    }
    return Frame(static_cast<int>(width), static_cast<int>(height), std::move(rgb), tag);
}

}  // namespace

bool has_image_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".ppm" || ext == ".png";
}

Frame load_frame(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = read_file(path);
    const std::string tag = path.string();

    if (data.size() >= 8 && std::memcmp(data.data(), kPngSignature, 8) == 0)
        return decode_png(data, tag);
    if (data.size() >= 2 && data[0] == 'P' && data[1] == '6')
        return decode_ppm(data, tag);
    throw DecodeError(tag, "unrecognized image format (expected PNG or P6 PPM)");
}

}  // namespace facetag

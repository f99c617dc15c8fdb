// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "facetag/provider.hpp"

namespace facetag {

// Decodes an image file to an RGB frame; source_tag is set to the path.
// Supported formats, sniffed by magic bytes: binary PPM (P6, maxval <= 255)
// and PNG (8-bit gray/RGB/gray+alpha/RGBA, non-interlaced; alpha is dropped).
// Anything else throws DecodeError.
Frame load_frame(const std::filesystem::path& path);

// True for the file extensions load_frame understands (.ppm/.png, any case).
bool has_image_extension(const std::filesystem::path& path);

}  // namespace facetag

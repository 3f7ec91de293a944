#pragma once

#include <string>

#include "camo/core/image.hpp"

namespace camo {

// Decodes a PNG or JPEG file (dispatch on magic bytes) into a float RGB
// image with channels scaled to [0,1]. Throws std::runtime_error with the
// file name on any failure.
Image read_image(const std::string& path);

// Writes an 8-bit RGB PNG; channels are clamped to [0,1] and rounded.
void write_png(const Image& img, const std::string& path);

}  // namespace camo

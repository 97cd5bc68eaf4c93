#pragma once

#include <cstdint>
#include <vector>

#include "img/image.hpp"

namespace diffspot::img {

// Deterministic PNG writer: fixed chunk layout (IHDR, one IDAT, IEND),
// filter type 0 on every row, fixed zlib settings. Byte-identical output
// for byte-identical pixels, on every platform.
std::vector<uint8_t> png_encode(const Image& image);

// Reads 8-bit non-interlaced PNGs, color types 0/2/3/4/6, all row filters.
// Anything else raises Error(ErrorCode::invalid).
Image png_decode(const std::vector<uint8_t>& bytes);

}  // namespace diffspot::img

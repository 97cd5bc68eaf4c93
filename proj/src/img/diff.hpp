#pragma once

#include <cstdint>
#include <vector>

#include "img/geometry.hpp"
#include "img/image.hpp"

namespace diffspot::img {

// Per-pixel change bitmap plus counts against a gate box. Every changed pixel
// is either inside or outside the box, so inside_count + outside_count equals
// the total number of changed pixels.
struct DiffMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> changed;  // row-major 0/1
    size_t inside_count = 0;
    size_t outside_count = 0;

    size_t total_pixels() const { return size_t(width) * size_t(height); }
    size_t changed_total() const { return inside_count + outside_count; }
    bool at(int x, int y) const { return changed[size_t(y) * size_t(width) + size_t(x)] != 0; }
};

// A pixel counts as changed iff any channel (RGBA) differs by more than
// `tolerance`. Dimension mismatch raises Error(ErrorCode::invalid).
DiffMask pixel_diff(const Image& a, const Image& b, const Rect& gate_box,
                    int tolerance = 0);

// Tight bounding rectangle of the changed pixels; empty Rect when none.
Rect changed_bounds(const DiffMask& mask);

}  // namespace diffspot::img

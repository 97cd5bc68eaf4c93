#include "img/diff.hpp"

#include <cstdlib>
#include <string>

#include "core/error.hpp"

namespace diffspot::img {

DiffMask pixel_diff(const Image& a, const Image& b, const Rect& gate_box,
                    int tolerance) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(ErrorCode::invalid,
                    "pixel_diff dimension mismatch: " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                        "x" + std::to_string(b.height()));
    }

    DiffMask mask;
    mask.width = a.width();
    mask.height = a.height();
    mask.changed.assign(mask.total_pixels(), 0);

    const auto& pa = a.bytes();
    const auto& pb = b.bytes();
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const size_t o = (size_t(y) * size_t(mask.width) + size_t(x)) * 4;
            bool diff = false;
            for (size_t c = 0; c < 4 && !diff; ++c) {
                diff = std::abs(int(pa[o + c]) - int(pb[o + c])) > tolerance;
            }
            if (!diff) continue;
            mask.changed[o / 4] = 1;
            if (gate_box.contains(x, y)) {
                ++mask.inside_count;
            } else {
                ++mask.outside_count;
            }
        }
    }
    return mask;
}

Rect changed_bounds(const DiffMask& mask) {
    int x0 = mask.width, y0 = mask.height, x1 = -1, y1 = -1;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) return {};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace diffspot::img

#pragma once

#include <algorithm>
#include <cstdint>

namespace diffspot::img {

// Integer pixel rectangle; (x, y) top-left, w/h in pixels.
struct Rect {
    int x = 0, y = 0, w = 0, h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }
    long long area() const { return (long long)(w) * h; }
    bool empty() const { return w <= 0 || h <= 0; }

    bool contains(int px, int py) const {
        return px >= x && py >= y && px < right() && py < bottom();
    }

    bool operator==(const Rect&) const = default;
};

inline Rect rect_union(const Rect& a, const Rect& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const int x0 = std::min(a.x, b.x);
    const int y0 = std::min(a.y, b.y);
    const int x1 = std::max(a.right(), b.right());
    const int y1 = std::max(a.bottom(), b.bottom());
    return {x0, y0, x1 - x0, y1 - y0};
}

inline Rect rect_intersect(const Rect& a, const Rect& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.right(), b.right());
    const int y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
    return {x0, y0, x1 - x0, y1 - y0};
}

inline Rect dilate(const Rect& r, int px) {
    return {r.x - px, r.y - px, r.w + 2 * px, r.h + 2 * px};
}

// Clamp to a (0,0,width,height) viewport.
inline Rect clamp_to(const Rect& r, int width, int height) {
    return rect_intersect(r, {0, 0, width, height});
}

}  // namespace diffspot::img

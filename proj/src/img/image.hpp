#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "core/hash.hpp"

namespace diffspot::img {

// Plain RGBA8 raster. Row-major, no padding; (0,0) is the top-left pixel.
struct Pixel {
    uint8_t r = 0, g = 0, b = 0, a = 255;
    bool operator==(const Pixel&) const = default;
};

class Image {
public:
    Image() = default;
    Image(int width, int height, Pixel fill = {0, 0, 0, 255})
        : width_(width), height_(height),
          data_(size_t(width) * size_t(height) * 4, 0) {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) set(x, y, fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }

    Pixel get(int x, int y) const {
        const uint8_t* p = &data_[idx(x, y)];
        return {p[0], p[1], p[2], p[3]};
    }
    void set(int x, int y, Pixel px) {
        uint8_t* p = &data_[idx(x, y)];
        p[0] = px.r; p[1] = px.g; p[2] = px.b; p[3] = px.a;
    }
    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    const std::vector<uint8_t>& bytes() const { return data_; }
    std::vector<uint8_t>& bytes() { return data_; }

    bool operator==(const Image& o) const {
        return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
    }

    // Stable content hash (dimensions + raw pixels).
    std::string content_hash() const {
        uint64_t h = kFnvOffset;
        const uint32_t dims[2] = {uint32_t(width_), uint32_t(height_)};
        h = fnv1a64_bytes(dims, sizeof(dims), h);
        h = fnv1a64_bytes(data_.data(), data_.size(), h);
        return hex64(h);
    }

private:
    size_t idx(int x, int y) const { return (size_t(y) * size_t(width_) + size_t(x)) * 4; }

    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> data_;
};

}  // namespace diffspot::img

#include "img/png.hpp"

#include <zlib.h>

#include <cstring>
#include <string>

#include "core/error.hpp"

namespace diffspot::img {

namespace {

constexpr uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

uint32_t read_u32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) |
           uint32_t(p[3]);
}

void append_chunk(std::vector<uint8_t>& out, const char type[4],
                  const std::vector<uint8_t>& data) {
    put_u32(out, uint32_t(data.size()));
    const size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, out.data() + type_at, uInt(4 + data.size()));
    put_u32(out, uint32_t(crc));
}

int channels_for_color_type(int color_type) {
    switch (color_type) {
        case 0: return 1;  // grayscale
        case 2: return 3;  // RGB
        case 3: return 1;  // palette index
        case 4: return 2;  // gray + alpha
        case 6: return 4;  // RGBA
        default: return 0;
    }
}

uint8_t paeth(uint8_t a, uint8_t b, uint8_t c) {
    const int p = int(a) + int(b) - int(c);
    const int pa = std::abs(p - int(a));
    const int pb = std::abs(p - int(b));
    const int pc = std::abs(p - int(c));
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

}  // namespace

std::vector<uint8_t> png_encode(const Image& image) {
    if (image.width() <= 0 || image.height() <= 0) {
        throw Error(ErrorCode::invalid, "cannot encode an empty image");
    }
    const size_t rowbytes = size_t(image.width()) * 4;

    // Filter type 0 on every row: deterministic and trivially reversible.
    std::vector<uint8_t> raw;
    raw.reserve((rowbytes + 1) * size_t(image.height()));
    const auto& px = image.bytes();
    for (int y = 0; y < image.height(); ++y) {
        raw.push_back(0);
        const uint8_t* row = px.data() + size_t(y) * rowbytes;
        raw.insert(raw.end(), row, row + rowbytes);
    }

    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK) {
        throw Error(ErrorCode::internal, "zlib compression failed");
    }
    compressed.resize(bound);

    std::vector<uint8_t> out(kSignature, kSignature + 8);
    std::vector<uint8_t> ihdr;
    put_u32(ihdr, uint32_t(image.width()));
    put_u32(ihdr, uint32_t(image.height()));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(6);  // RGBA
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // adaptive filtering
    ihdr.push_back(0);  // no interlace
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", compressed);
    append_chunk(out, "IEND", {});
    return out;
}

Image png_decode(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
        throw Error(ErrorCode::invalid, "not a PNG: bad signature");
    }

    uint32_t width = 0, height = 0;
    int bit_depth = 0, color_type = 0, interlace = 0;
    std::vector<uint8_t> idat;
    std::vector<uint8_t> palette;       // RGB triplets
    std::vector<uint8_t> palette_alpha; // tRNS entries
    bool saw_ihdr = false, saw_iend = false;

    size_t pos = 8;
    while (pos + 12 <= bytes.size()) {
        const uint32_t len = read_u32(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) {
            throw Error(ErrorCode::invalid, "truncated PNG chunk");
        }
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const uint8_t* data = &bytes[pos + 8];

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw Error(ErrorCode::invalid, "bad IHDR length");
            width = read_u32(data);
            height = read_u32(data + 4);
            bit_depth = data[8];
            color_type = data[9];
            interlace = data[12];
            saw_ihdr = true;
        } else if (std::memcmp(type, "PLTE", 4) == 0) {
            palette.assign(data, data + len);
        } else if (std::memcmp(type, "tRNS", 4) == 0) {
            palette_alpha.assign(data, data + len);
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
            break;
        }
        pos += 12 + len;
    }

    if (!saw_ihdr || !saw_iend) throw Error(ErrorCode::invalid, "incomplete PNG");
    if (bit_depth != 8) {
        throw Error(ErrorCode::invalid,
                    "unsupported PNG bit depth " + std::to_string(bit_depth));
    }
    if (interlace != 0) throw Error(ErrorCode::invalid, "interlaced PNG unsupported");
    const int channels = channels_for_color_type(color_type);
    if (channels == 0) {
        throw Error(ErrorCode::invalid,
                    "unsupported PNG color type " + std::to_string(color_type));
    }
    if (width == 0 || height == 0 || width > (1u << 15) || height > (1u << 15)) {
        throw Error(ErrorCode::invalid, "unreasonable PNG dimensions");
    }

    const size_t rowbytes = size_t(width) * size_t(channels);
    const size_t expected = (rowbytes + 1) * size_t(height);
    std::vector<uint8_t> raw(expected);
    uLongf raw_len = uLongf(expected);
    const int zret = uncompress(raw.data(), &raw_len, idat.data(), uLong(idat.size()));
    if (zret != Z_OK || raw_len != expected) {
        throw Error(ErrorCode::invalid, "PNG inflate failed or size mismatch");
    }

    // Undo per-row filters in place (into `recon`, rows without filter bytes).
    std::vector<uint8_t> recon(rowbytes * height);
    const size_t bpp = size_t(channels);
    for (size_t y = 0; y < height; ++y) {
        const uint8_t filter = raw[y * (rowbytes + 1)];
        const uint8_t* src = &raw[y * (rowbytes + 1) + 1];
        uint8_t* dst = &recon[y * rowbytes];
        const uint8_t* prev = y > 0 ? &recon[(y - 1) * rowbytes] : nullptr;
        for (size_t x = 0; x < rowbytes; ++x) {
            const uint8_t a = x >= bpp ? dst[x - bpp] : 0;
            const uint8_t b = prev ? prev[x] : 0;
            const uint8_t c = (prev && x >= bpp) ? prev[x - bpp] : 0;
            uint8_t v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v = uint8_t(v + a); break;
                case 2: v = uint8_t(v + b); break;
                case 3: v = uint8_t(v + (int(a) + int(b)) / 2); break;
                case 4: v = uint8_t(v + paeth(a, b, c)); break;
                default:
                    throw Error(ErrorCode::invalid,
                                "bad PNG row filter " + std::to_string(filter));
            }
            dst[x] = v;
        }
    }

    const int iw = int(width), ih = int(height);
    Image image(iw, ih);
    for (size_t y = 0; y < height; ++y) {
        for (size_t x = 0; x < width; ++x) {
            const uint8_t* p = &recon[y * rowbytes + x * bpp];
            Pixel out;
            switch (color_type) {
                case 0: out = {p[0], p[0], p[0], 255}; break;
                case 2: out = {p[0], p[1], p[2], 255}; break;
                case 3: {
                    const size_t i = p[0];
                    if (i * 3 + 2 >= palette.size()) {
                        throw Error(ErrorCode::invalid, "palette index out of range");
                    }
                    const uint8_t alpha =
                        i < palette_alpha.size() ? palette_alpha[i] : 255;
                    out = {palette[i * 3], palette[i * 3 + 1], palette[i * 3 + 2], alpha};
                    break;
                }
                case 4: out = {p[0], p[0], p[0], p[1]}; break;
                case 6: out = {p[0], p[1], p[2], p[3]}; break;
            }
            image.set(int(x), int(y), out);
        }
    }
    return image;
}

}  // namespace diffspot::img

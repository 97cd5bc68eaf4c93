#include "net/sha1.hpp"

#include <cstring>
#include <vector>

namespace diffspot::net {

namespace {

uint32_t rotl32(uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

}  // namespace

std::array<uint8_t, 20> sha1(std::string_view data) {
    uint32_t h[5] = {0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476, 0xC3D2E1F0};

    // Pad to a multiple of 64 bytes: 0x80, zeros, 64-bit big-endian bit length.
    std::vector<uint8_t> msg(data.begin(), data.end());
    const uint64_t bit_len = uint64_t(msg.size()) * 8;
    msg.push_back(0x80);
    while (msg.size() % 64 != 56) msg.push_back(0);
    for (int i = 7; i >= 0; --i) msg.push_back(uint8_t(bit_len >> (i * 8)));

    for (size_t chunk = 0; chunk < msg.size(); chunk += 64) {
        uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = uint32_t(msg[chunk + i * 4]) << 24 |
                   uint32_t(msg[chunk + i * 4 + 1]) << 16 |
                   uint32_t(msg[chunk + i * 4 + 2]) << 8 |
                   uint32_t(msg[chunk + i * 4 + 3]);
        }
        for (int i = 16; i < 80; ++i) {
            w[i] = rotl32(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDC;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6;
            }
            const uint32_t temp = rotl32(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl32(b, 30);
            b = a;
            a = temp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::array<uint8_t, 20> out{};
    for (int i = 0; i < 5; ++i) {
        out[size_t(i * 4)] = uint8_t(h[i] >> 24);
        out[size_t(i * 4 + 1)] = uint8_t(h[i] >> 16);
        out[size_t(i * 4 + 2)] = uint8_t(h[i] >> 8);
        out[size_t(i * 4 + 3)] = uint8_t(h[i]);
    }
    return out;
}

}  // namespace diffspot::net

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace diffspot {

// FNV-1a, 64-bit. Stable across platforms and runs; used for structure
// fingerprints, pixel-buffer hashes, and config stamps.
inline constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr uint64_t kFnvPrime = 0x100000001b3ull;

// Distinct name for the raw-buffer form: with an overload, a string literal
// plus a chained seed would bind to (const void*, size_t) and treat the seed
// as a byte count.
inline uint64_t fnv1a64_bytes(const void* data, size_t len, uint64_t seed = kFnvOffset) {
    const auto* p = static_cast<const uint8_t*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t seed = kFnvOffset) {
    return fnv1a64_bytes(s.data(), s.size(), seed);
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[size_t(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace diffspot

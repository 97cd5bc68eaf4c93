#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "core/hash.hpp"

namespace diffspot {

// Deterministic, platform-stable RNG. std:: distributions are not guaranteed
// to produce identical streams across standard libraries, so every randomized
// stage draws through this class instead. xoshiro256** seeded via splitmix64.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : state_) {
            // splitmix64 step
            x += 0x9e3779b97f4a7c15ull;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    // Independent stream for a named sub-task. Streams derived with distinct
    // labels from the same master seed are uncorrelated for our purposes.
    Rng derive(std::string_view label) const {
        uint64_t h = fnv1a64(label);
        return Rng(state_[0] ^ (h * 0x2545f4914f6cdd1dull));
    }

    Rng derive(uint64_t salt) const {
        return Rng(state_[0] ^ (salt * 0x9e3779b97f4a7c15ull + 0x165667b19e3779f9ull));
    }

    uint64_t next_u64() {
        uint64_t* s = state_;
        uint64_t result = rotl(s[1] * 5, 7) * 9;
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Unbiased integer in [0, n). n must be >= 1.
    uint64_t bounded(uint64_t n) {
        uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Integer in [lo, hi], inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + int64_t(bounded(uint64_t(hi - lo + 1)));
    }

    // Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool coin() { return (next_u64() & 1) != 0; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = size_t(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices drawn from [0, n), in draw order.
    std::vector<size_t> sample_indices(size_t n, size_t k) {
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        if (k > n) k = n;
        for (size_t i = 0; i < k; ++i) {
            size_t j = i + size_t(bounded(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
};

}  // namespace diffspot

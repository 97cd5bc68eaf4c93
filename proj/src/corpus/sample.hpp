#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "core/rng.hpp"
#include "corpus/types.hpp"

namespace diffspot::corpus {

// Caps each domain at `cap_per_domain` pages. Over-cap domains are thinned
// uniformly under a per-domain RNG stream derived from `seed`, so the result
// is independent of domain iteration order. Relative pool order is preserved;
// under-cap domains pass through untouched.
inline std::vector<PageSource> capped_sample(const std::vector<PageSource>& pool,
                                             size_t cap_per_domain, uint64_t seed) {
    std::map<std::string, std::vector<size_t>> by_domain;
    for (size_t i = 0; i < pool.size(); ++i) {
        by_domain[pool[i].domain_label].push_back(i);
    }

    std::vector<bool> keep(pool.size(), true);
    Rng base(seed);
    for (const auto& [domain, indices] : by_domain) {
        if (indices.size() <= cap_per_domain) continue;
        Rng rng = base.derive("capped_sample/" + domain);
        const auto chosen = rng.sample_indices(indices.size(), cap_per_domain);
        std::vector<bool> chosen_mask(indices.size(), false);
        for (size_t c : chosen) chosen_mask[c] = true;
        for (size_t j = 0; j < indices.size(); ++j) {
            if (!chosen_mask[j]) keep[indices[j]] = false;
        }
    }

    std::vector<PageSource> out;
    out.reserve(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        if (keep[i]) out.push_back(pool[i]);
    }
    return out;
}

}  // namespace diffspot::corpus

#pragma once

#include <memory>

#include "corpus/types.hpp"

namespace diffspot::corpus {

// Compiled form of FilterConfig; regex compilation errors surface at
// construction, before any page is scanned.
class ContentFilter {
public:
    explicit ContentFilter(const FilterConfig& config);

    std::set<FilterFlag> evaluate(const std::string& html_source) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace diffspot::corpus

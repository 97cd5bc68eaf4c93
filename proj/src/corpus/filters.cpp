#include "corpus/filters.hpp"

#include <regex>

#include "core/error.hpp"
#include "html/dom.hpp"

namespace diffspot::corpus {

const char* filter_flag_name(FilterFlag f) {
    switch (f) {
        case FilterFlag::pii: return "pii";
        case FilterFlag::body_too_short: return "body_too_short";
        case FilterFlag::body_too_long: return "body_too_long";
        case FilterFlag::dynamic_tag: return "dynamic_tag";
        case FilterFlag::label_invalid: return "label_invalid";
    }
    return "unknown";
}

FilterConfig default_filter_config() {
    FilterConfig config;
    // Quantifiers are deliberately bounded: self-contained pages carry huge
    // base64 runs, and an unbounded class repeat makes backtracking engines
    // recurse once per consumed byte.
    config.pii_patterns = {
        // Email addresses.
        R"([A-Za-z0-9._%+-]{1,64}@[A-Za-z0-9.-]{1,255}\.[A-Za-z]{2,24})",
        // Phone numbers: optional country code, then grouped digits such as
        // 555-867-5309, (555) 867 5309, +1 555.867.5309.
        R"((\+?\d{1,3}[ .-]?)?(\(\d{3}\)|\d{3})[ .-]\d{3}[ .-]\d{4})",
        // US social security numbers.
        R"(\b\d{3}-\d{2}-\d{4}\b)",
    };
    return config;
}

struct ContentFilter::Impl {
    FilterConfig config;
    std::vector<std::regex> pii;
};

ContentFilter::ContentFilter(const FilterConfig& config) {
    auto impl = std::make_shared<Impl>();
    impl->config = config;
    for (const auto& pattern : config.pii_patterns) {
        try {
            impl->pii.emplace_back(pattern, std::regex::ECMAScript | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw Error(ErrorCode::config,
                        "invalid PII pattern '" + pattern + "': " + e.what());
        }
    }
    impl_ = std::move(impl);
}

std::set<FilterFlag> ContentFilter::evaluate(const std::string& html_source) const {
    std::set<FilterFlag> flags;

    if (html_source.size() < impl_->config.min_body_bytes) {
        flags.insert(FilterFlag::body_too_short);
    }
    if (html_source.size() > impl_->config.max_body_bytes) {
        flags.insert(FilterFlag::body_too_long);
    }

    for (const auto& re : impl_->pii) {
        if (std::regex_search(html_source, re)) {
            flags.insert(FilterFlag::pii);
            break;
        }
    }

    html::Document doc = html::parse(html_source);
    for (const html::Node* el : doc.elements) {
        for (const auto& tag : impl_->config.dynamic_tags) {
            if (el->tag == tag) {
                flags.insert(FilterFlag::dynamic_tag);
                break;
            }
        }
        if (flags.count(FilterFlag::dynamic_tag)) break;
    }

    return flags;
}

}  // namespace diffspot::corpus

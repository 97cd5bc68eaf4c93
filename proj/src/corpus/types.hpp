#pragma once

#include <set>
#include <string>
#include <vector>

namespace diffspot::corpus {

// Rejection reasons accumulated over the ingest filters. A page enters the
// mutation stage only with an empty set.
enum class FilterFlag {
    pii,
    body_too_short,
    body_too_long,
    dynamic_tag,
    label_invalid,
};

const char* filter_flag_name(FilterFlag f);

struct PageSource {
    std::string page_id;
    std::string html_path;
    std::string html;
    std::string fingerprint;
    std::string domain_label;
    std::string style_label;
    std::set<FilterFlag> filter_flags;
    bool label_unresolved = false;  // transport failure, distinct from rejection
};

struct FilterConfig {
    std::vector<std::string> pii_patterns;  // ECMAScript regexes over raw source
    size_t min_body_bytes = 2 * 1024;
    size_t max_body_bytes = 600 * 1024;
    std::vector<std::string> dynamic_tags = {"script", "video", "canvas", "iframe"};
};

FilterConfig default_filter_config();

struct EmbeddingGateResult {
    double similarity = 0.0;
    double threshold = 0.70;
    bool passed = false;
};

struct LabelConfig {
    std::vector<std::string> domain_categories;
    std::vector<std::string> style_categories;
};

}  // namespace diffspot::corpus

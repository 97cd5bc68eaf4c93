#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus/filters.hpp"
#include "corpus/labeler.hpp"
#include "corpus/types.hpp"

namespace diffspot::corpus {

using LabelFn = std::function<LabelResult(const PageSource&)>;

struct IngestStats {
    size_t scanned = 0;
    size_t duplicates_dropped = 0;
    size_t filtered_out = 0;
    size_t label_invalid = 0;
    size_t label_unresolved = 0;
    size_t capped_out = 0;
    size_t pool = 0;
};

struct IngestOutput {
    // Every non-duplicate page scanned, with flags; audit trail for the
    // manifest. `pool` below is the subset carried forward.
    std::vector<PageSource> all_pages;
    std::vector<PageSource> pool;
    IngestStats stats;
};

// Directory of .html files -> filtered, labeled, capped pool. Files are read
// in sorted-path order; the first page per structure fingerprint wins.
IngestOutput ingest_pages(const std::string& pages_dir, const ContentFilter& filter,
                          const LabelFn& label_fn, size_t cap_per_domain,
                          uint64_t seed);

nlohmann::json page_to_json(const PageSource& page, bool in_pool);
PageSource page_from_json(const nlohmann::json& row);

}  // namespace diffspot::corpus

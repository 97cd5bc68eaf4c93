#include "corpus/ingest.hpp"

#include <filesystem>
#include <set>

#include "core/fsutil.hpp"
#include "corpus/fingerprint.hpp"
#include "corpus/sample.hpp"

namespace diffspot::corpus {

IngestOutput ingest_pages(const std::string& pages_dir, const ContentFilter& filter,
                          const LabelFn& label_fn, size_t cap_per_domain,
                          uint64_t seed) {
    IngestOutput out;
    std::set<std::string> seen_fingerprints;

    for (const auto& path : fsutil::list_files(pages_dir, ".html")) {
        ++out.stats.scanned;
        PageSource page;
        page.html_path = path.string();
        page.page_id = path.stem().string();
        page.html = fsutil::read_text_file(path);
        page.fingerprint = structure_fingerprint(page.html);

        if (!seen_fingerprints.insert(page.fingerprint).second) {
            ++out.stats.duplicates_dropped;
            continue;
        }

        page.filter_flags = filter.evaluate(page.html);
        if (!page.filter_flags.empty()) {
            ++out.stats.filtered_out;
            out.all_pages.push_back(std::move(page));
            continue;
        }

        const LabelResult label = label_fn(page);
        if (label.unresolved) {
            ++out.stats.label_unresolved;
            page.label_unresolved = true;
            out.all_pages.push_back(std::move(page));
            continue;
        }
        if (label.invalid) {
            ++out.stats.label_invalid;
            page.filter_flags.insert(FilterFlag::label_invalid);
            out.all_pages.push_back(std::move(page));
            continue;
        }
        page.domain_label = label.domain;
        page.style_label = label.style;
        out.all_pages.push_back(page);
        out.pool.push_back(std::move(page));
    }

    const size_t before_cap = out.pool.size();
    out.pool = capped_sample(out.pool, cap_per_domain, seed);
    out.stats.capped_out = before_cap - out.pool.size();
    out.stats.pool = out.pool.size();
    return out;
}

nlohmann::json page_to_json(const PageSource& page, bool in_pool) {
    nlohmann::json flags = nlohmann::json::array();
    for (FilterFlag f : page.filter_flags) flags.push_back(filter_flag_name(f));
    return {
        {"page_id", page.page_id},
        {"html_path", page.html_path},
        {"fingerprint", page.fingerprint},
        {"domain_label", page.domain_label},
        {"style_label", page.style_label},
        {"filter_flags", flags},
        {"label_unresolved", page.label_unresolved},
        {"in_pool", in_pool},
    };
}

PageSource page_from_json(const nlohmann::json& row) {
    PageSource page;
    page.page_id = row.at("page_id").get<std::string>();
    page.html_path = row.at("html_path").get<std::string>();
    page.fingerprint = row.at("fingerprint").get<std::string>();
    page.domain_label = row.value("domain_label", "");
    page.style_label = row.value("style_label", "");
    page.label_unresolved = row.value("label_unresolved", false);
    for (const auto& name : row.value("filter_flags", nlohmann::json::array())) {
        const std::string s = name.get<std::string>();
        for (FilterFlag f : {FilterFlag::pii, FilterFlag::body_too_short,
                             FilterFlag::body_too_long, FilterFlag::dynamic_tag,
                             FilterFlag::label_invalid}) {
            if (s == filter_flag_name(f)) page.filter_flags.insert(f);
        }
    }
    return page;
}

}  // namespace diffspot::corpus

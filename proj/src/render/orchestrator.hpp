#pragma once

#include <memory>
#include <string>
#include <vector>

#include "img/diff.hpp"
#include "render/renderer.hpp"

namespace diffspot::render {

// One rendered before/after pair with target geometry from both sides.
struct PairRender {
    std::shared_ptr<const RenderArtifact> before;
    std::shared_ptr<const RenderArtifact> after;
    Bbox bbox_before;
    Bbox bbox_after;
};

// Renders both documents and resolves the selector on each side. The before
// page is rendered exactly once.
PairRender render_pair(Renderer& renderer, const std::string& before_html,
                       const std::string& after_html, const std::string& selector);

// Grouped candidates share one before render: the before artifact (and its
// bbox) is computed once and aliased into every returned pair;
// pair[i].before points at the same artifact object.
std::vector<PairRender> render_group(Renderer& renderer,
                                     const std::string& before_html,
                                     const std::vector<std::string>& after_htmls,
                                     const std::string& selector);

// Double-render determinism audit: every page rendered twice; a page passes
// when the two screenshots are pixel-identical.
struct AuditEntry {
    std::string page_id;
    bool identical = false;
    std::string hash_first;
    std::string hash_second;
    size_t changed_pixels = 0;  // 0 when identical
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    size_t identical_count = 0;

    size_t total() const { return entries.size(); }
    // Acceptance rule for the determinism profile.
    bool passed(double min_fraction = 0.95) const {
        if (entries.empty()) return false;
        return double(identical_count) >= min_fraction * double(entries.size());
    }
};

AuditReport double_render_audit(
    Renderer& renderer,
    const std::vector<std::pair<std::string, std::string>>& pages /* id, html */);

}  // namespace diffspot::render

#include "render/orchestrator.hpp"

namespace diffspot::render {

PairRender render_pair(Renderer& renderer, const std::string& before_html,
                       const std::string& after_html, const std::string& selector) {
    PairRender out;
    auto before = renderer.render_page(before_html);
    out.before = std::make_shared<RenderArtifact>(before->artifact());
    out.bbox_before = before->query_bbox(selector);
    before.reset();  // one session at a time

    auto after = renderer.render_page(after_html);
    out.after = std::make_shared<RenderArtifact>(after->artifact());
    out.bbox_after = after->query_bbox(selector);
    return out;
}

std::vector<PairRender> render_group(Renderer& renderer,
                                     const std::string& before_html,
                                     const std::vector<std::string>& after_htmls,
                                     const std::string& selector) {
    auto before_session = renderer.render_page(before_html);
    const auto before =
        std::make_shared<RenderArtifact>(before_session->artifact());
    const Bbox bbox_before = before_session->query_bbox(selector);
    before_session.reset();

    std::vector<PairRender> out;
    out.reserve(after_htmls.size());
    for (const std::string& after_html : after_htmls) {
        PairRender pair;
        pair.before = before;  // shared, not re-rendered
        pair.bbox_before = bbox_before;
        auto after = renderer.render_page(after_html);
        pair.after = std::make_shared<RenderArtifact>(after->artifact());
        pair.bbox_after = after->query_bbox(selector);
        out.push_back(std::move(pair));
    }
    return out;
}

AuditReport double_render_audit(
    Renderer& renderer,
    const std::vector<std::pair<std::string, std::string>>& pages) {
    AuditReport report;
    for (const auto& [page_id, html] : pages) {
        AuditEntry entry;
        entry.page_id = page_id;
        const auto first = renderer.render_page(html);
        const img::Image shot1 = first->artifact().screenshot;
        entry.hash_first = first->artifact().render_hash;

        const auto second = renderer.render_page(html);
        entry.hash_second = second->artifact().render_hash;
        entry.identical = entry.hash_first == entry.hash_second;
        if (!entry.identical) {
            const img::DiffMask mask = img::pixel_diff(
                shot1, second->artifact().screenshot,
                img::Rect{0, 0, shot1.width(), shot1.height()});
            entry.changed_pixels = mask.changed_total();
        }
        report.identical_count += entry.identical ? 1 : 0;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace diffspot::render

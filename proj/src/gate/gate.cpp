#include "gate/gate.hpp"

#include "img/diff.hpp"

namespace diffspot::gate {

GateVerdict evaluate_gate(const render::PairRender& pair, int dilation,
                          int tolerance) {
    const img::Image& before = pair.before->screenshot;
    const img::Image& after = pair.after->screenshot;

    GateVerdict v;
    v.resolved = pair.bbox_before.resolved && pair.bbox_after.resolved &&
                 pair.bbox_before.unique && pair.bbox_after.unique;

    img::Rect box = img::rect_union(pair.bbox_before.rect, pair.bbox_after.rect);
    if (!box.empty()) box = img::dilate(box, dilation);
    v.gate_box = img::clamp_to(box, before.width(), before.height());

    const img::DiffMask mask = img::pixel_diff(before, after, v.gate_box, tolerance);
    v.inside_count = mask.inside_count;
    v.outside_count = mask.outside_count;
    v.effective = mask.inside_count > 0;
    v.local = mask.outside_count == 0;
    v.accepted = v.effective && v.local && v.resolved;
    v.inside_fraction = double(mask.inside_count) / double(mask.total_pixels());
    return v;
}

nlohmann::json gate_to_json(const GateVerdict& v) {
    return {
        {"effective", v.effective},
        {"local", v.local},
        {"resolved", v.resolved},
        {"accepted", v.accepted},
        {"inside_fraction", v.inside_fraction},
        {"gate_box",
         {{"x", v.gate_box.x}, {"y", v.gate_box.y}, {"w", v.gate_box.w}, {"h", v.gate_box.h}}},
        {"inside_count", v.inside_count},
        {"outside_count", v.outside_count},
    };
}

nlohmann::json bbox_to_json(const render::Bbox& b) {
    nlohmann::json j{{"resolved", b.resolved}};
    if (!b.resolved) return j;  // geometry fields absent when unresolved
    j["unique"] = b.unique;
    j["x"] = b.rect.x;
    j["y"] = b.rect.y;
    j["w"] = b.rect.w;
    j["h"] = b.rect.h;
    j["unclamped"] = {{"x", b.unclamped.x},
                      {"y", b.unclamped.y},
                      {"w", b.unclamped.w},
                      {"h", b.unclamped.h}};
    return j;
}

const char* filter_reason_name(FilterReason r) {
    switch (r) {
        case FilterReason::text_truncation: return "text_truncation";
        case FilterReason::bbox_failure: return "bbox_failure";
        case FilterReason::font_tofu: return "font_tofu";
        case FilterReason::viewport_overflow: return "viewport_overflow";
    }
    return "unknown";
}

namespace {

// Fraction of the unclamped bbox area lying below the viewport bottom.
double below_fold_fraction(const render::Bbox& bbox, int viewport_h) {
    if (!bbox.resolved || bbox.unclamped.empty()) return 0.0;
    const img::Rect& r = bbox.unclamped;
    const int below_h = std::min(r.h, std::max(0, r.bottom() - viewport_h));
    return double(below_h) / double(r.h);
}

long long visible_area(const render::Bbox& bbox) {
    return bbox.rect.area();
}

}  // namespace

std::set<FilterReason> post_filters(const FilterInput& input,
                                    const PostFilterConfig& config) {
    std::set<FilterReason> reasons;

    if (input.operator_name == "text") {
        const std::string old_prefix =
            input.old_value.substr(0, config.text_prefix_len);
        const std::string new_prefix =
            input.new_value.substr(0, config.text_prefix_len);
        if (old_prefix == new_prefix) reasons.insert(FilterReason::text_truncation);
    }

    if (!input.bbox_before.resolved || !input.bbox_after.resolved ||
        visible_area(input.bbox_before) < config.min_visible_area ||
        visible_area(input.bbox_after) < config.min_visible_area) {
        reasons.insert(FilterReason::bbox_failure);
    }

    if (contains_tofu_codepoint(input.page_text, config.tofu_ranges)) {
        reasons.insert(FilterReason::font_tofu);
    }

    const double frac = std::max(below_fold_fraction(input.bbox_before, input.viewport_h),
                                 below_fold_fraction(input.bbox_after, input.viewport_h));
    if (frac > config.overflow_threshold) {
        reasons.insert(FilterReason::viewport_overflow);
    }

    return reasons;
}

bool contains_tofu_codepoint(
    const std::string& text,
    const std::vector<std::pair<uint32_t, uint32_t>>& ranges) {
    auto is_continuation = [&](size_t pos) {
        return pos < text.size() && (uint8_t(text[pos]) & 0xC0) == 0x80;
    };
    size_t i = 0;
    while (i < text.size()) {
        const uint8_t b0 = uint8_t(text[i]);
        uint32_t cp = 0;
        size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0 && is_continuation(i + 1)) {
            cp = uint32_t(b0 & 0x1F) << 6 | (uint8_t(text[i + 1]) & 0x3F);
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0 && is_continuation(i + 1) &&
                   is_continuation(i + 2)) {
            cp = uint32_t(b0 & 0x0F) << 12 |
                 uint32_t(uint8_t(text[i + 1]) & 0x3F) << 6 |
                 (uint8_t(text[i + 2]) & 0x3F);
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0 && is_continuation(i + 1) &&
                   is_continuation(i + 2) && is_continuation(i + 3)) {
            cp = uint32_t(b0 & 0x07) << 18 |
                 uint32_t(uint8_t(text[i + 1]) & 0x3F) << 12 |
                 uint32_t(uint8_t(text[i + 2]) & 0x3F) << 6 |
                 (uint8_t(text[i + 3]) & 0x3F);
            len = 4;
        } else {
            // Malformed lead or missing continuation: skip one byte so a
            // valid sequence right after is still decoded.
            i += 1;
            continue;
        }
        for (const auto& [lo, hi] : ranges) {
            if (cp >= lo && cp <= hi) return true;
        }
        i += len;
    }
    return false;
}

}  // namespace diffspot::gate

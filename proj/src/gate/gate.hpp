#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "img/geometry.hpp"
#include "render/orchestrator.hpp"

namespace diffspot::gate {

// Acceptance verdict for one rendered pair. accepted <=> effective (some
// pixel changed inside the gate box) AND local (no pixel changed outside)
// AND resolved (selector resolved uniquely on both sides).
struct GateVerdict {
    bool effective = false;
    bool local = false;
    bool resolved = false;
    bool accepted = false;
    double inside_fraction = 0.0;  // inside_count / total pixels
    img::Rect gate_box{};
    size_t inside_count = 0;
    size_t outside_count = 0;
};

// Gate box = union of the two viewport-clamped bboxes, dilated then clamped.
// The small default dilation absorbs anti-aliasing bleed at box edges.
GateVerdict evaluate_gate(const render::PairRender& pair, int dilation = 2,
                          int tolerance = 0);

nlohmann::json gate_to_json(const GateVerdict& v);
nlohmann::json bbox_to_json(const render::Bbox& b);

// ---------------------------------------------------------------------------
// Post-filters
// ---------------------------------------------------------------------------

enum class FilterReason {
    text_truncation,
    bbox_failure,
    font_tofu,
    viewport_overflow,
};
const char* filter_reason_name(FilterReason r);

struct PostFilterConfig {
    // Records store element text as fixed-length prefixes; a text mutation
    // whose edit lies wholly beyond the prefix is unverifiable.
    size_t text_prefix_len = 50;
    // Minimum visible (clamped) bbox area in px^2; below this the rectangle
    // counts as clipped-to-nothing.
    long long min_visible_area = 4;
    // Maximum fraction of the unclamped bbox area below the viewport bottom.
    double overflow_threshold = 0.30;
    // Unicode ranges whose presence marks text the render font cannot show.
    std::vector<std::pair<uint32_t, uint32_t>> tofu_ranges = {
        {0x1100, 0x11FF},  // Hangul Jamo
        {0xAC00, 0xD7AF},  // Hangul syllables
        {0x0E00, 0x0E7F},  // Thai
        {0x0900, 0x097F},  // Devanagari
    };
};

struct FilterInput {
    std::string operator_name;
    std::string old_value;  // record prefix (text operator)
    std::string new_value;
    render::Bbox bbox_before;
    render::Bbox bbox_after;
    std::string page_text;  // visible text of the page (tofu scan)
    int viewport_h = 800;
};

// Independently evaluated predicates; the result is their union.
std::set<FilterReason> post_filters(const FilterInput& input,
                                    const PostFilterConfig& config = {});

// True when `text` contains any code point inside `ranges` (UTF-8 decoded;
// malformed sequences are skipped, never fatal).
bool contains_tofu_codepoint(
    const std::string& text,
    const std::vector<std::pair<uint32_t, uint32_t>>& ranges);

}  // namespace diffspot::gate

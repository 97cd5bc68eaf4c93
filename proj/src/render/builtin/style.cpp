#include "render/builtin/style.hpp"

#include <cmath>
#include <map>

#include "core/strings.hpp"
#include "mutate/class_scales.hpp"
#include "render/builtin/palette.hpp"

namespace diffspot::render {

namespace {

// Glyph cell heights for the ten font-size tokens; all distinct so every
// one-step font-size swap changes pixels.
constexpr int kFontSizePx[10] = {10, 12, 14, 16, 18, 22, 27, 33, 42, 54};

constexpr int kRoundedPx[9] = {0, 2, 4, 6, 8, 12, 16, 24, 999};

constexpr int kBorderPx[5] = {0, 1, 2, 4, 8};

int parse_int(std::string_view s, int fallback = 0) {
    try {
        return std::stoi(std::string(s));
    } catch (...) {
        return fallback;
    }
}

// "p-" -> all padding sides, "mx-" -> horizontal margins, etc.
// Returns (array target, mask of indices) where indices follow
// top/right/bottom/left.
struct SideSpec {
    bool is_margin = false;
    bool sides[4] = {false, false, false, false};
};

std::optional<SideSpec> side_spec(std::string_view prefix) {
    static const std::map<std::string, SideSpec, std::less<>> table = {
        {"p-", {false, {true, true, true, true}}},
        {"px-", {false, {false, true, false, true}}},
        {"py-", {false, {true, false, true, false}}},
        {"pt-", {false, {true, false, false, false}}},
        {"pr-", {false, {false, true, false, false}}},
        {"pb-", {false, {false, false, true, false}}},
        {"pl-", {false, {false, false, false, true}}},
        {"m-", {true, {true, true, true, true}}},
        {"mx-", {true, {false, true, false, true}}},
        {"my-", {true, {true, false, true, false}}},
        {"mt-", {true, {true, false, false, false}}},
        {"mr-", {true, {false, true, false, false}}},
        {"mb-", {true, {false, false, true, false}}},
        {"ml-", {true, {false, false, false, true}}},
    };
    const auto it = table.find(prefix);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

// Splits "bg-blue-500" after a known prefix into hue and shade.
std::optional<img::Pixel> shade_token_color(std::string_view rest) {
    const size_t dash = rest.rfind('-');
    if (dash == std::string_view::npos) return std::nullopt;
    const std::string_view hue = rest.substr(0, dash);
    const int shade = parse_int(rest.substr(dash + 1), -1);
    return palette_color(hue, shade);
}

void apply_class_token(Style& s, const std::string& tok) {
    using mutate::ClassScales;
    const ClassScales& scales = ClassScales::builtin();

    // Step-scale tokens first: the renderer must honor exactly the tokens the
    // mutation engine swaps.
    if (const auto hit = scales.find_token("font_weight", tok)) {
        s.font_weight = int(hit->second + 1) * 100;
        return;
    }
    if (const auto hit = scales.find_token("font_size", tok)) {
        s.font_px = kFontSizePx[hit->second];
        return;
    }
    if (const auto hit = scales.find_token("opacity", tok)) {
        s.opacity = double(hit->second) / 10.0;
        return;
    }
    if (const auto hit = scales.find_token("gradient", tok)) {
        s.gradient_dir = int(hit->second);
        return;
    }
    if (const auto hit = scales.find_token("justify", tok)) {
        s.justify = Justify(hit->second);
        return;
    }
    if (const auto hit = scales.find_token("border", tok)) {
        s.border_width = kBorderPx[hit->second];
        return;
    }
    if (const auto hit = scales.find_token("rounded", tok)) {
        s.border_radius = kRoundedPx[hit->second];
        return;
    }
    if (scales.find_token("color", tok)) {
        if (starts_with(tok, "bg-")) {
            s.background = shade_token_color(std::string_view(tok).substr(3));
        } else if (starts_with(tok, "text-")) {
            if (const auto c = shade_token_color(std::string_view(tok).substr(5)))
                s.text_color = *c;
        }
        return;
    }
    if (scales.find_token("position", tok)) {
        const bool is_x = starts_with(tok, "translate-x-");
        const int v = parse_int(std::string_view(tok).substr(12));
        (is_x ? s.translate_x : s.translate_y) = v * 4;
        return;
    }
    if (scales.find_token("spacing", tok)) {
        if (starts_with(tok, "gap-x-")) {
            s.gap_x = parse_int(std::string_view(tok).substr(6)) * 4;
            return;
        }
        if (starts_with(tok, "gap-y-")) {
            s.gap_y = parse_int(std::string_view(tok).substr(6)) * 4;
            return;
        }
        if (starts_with(tok, "gap-")) {
            const int v = parse_int(std::string_view(tok).substr(4)) * 4;
            s.gap_x = s.gap_y = v;
            return;
        }
        const size_t dash = tok.find('-');
        const auto spec = side_spec(std::string_view(tok).substr(0, dash + 1));
        if (!spec) return;
        const int v = parse_int(std::string_view(tok).substr(dash + 1)) * 4;
        auto& arr = spec->is_margin ? s.margin : s.padding;
        for (int i = 0; i < 4; ++i) {
            if (spec->sides[i]) arr[size_t(i)] = v;
        }
        return;
    }

    // Structural utilities outside the mutation taxonomy.
    if (tok == "flex") {
        s.display = Display::flex_row;
    } else if (tok == "hidden") {
        s.display = Display::none;
    } else if (tok == "w-full") {
        s.width_full = true;
    } else if (tok == "bg-white") {
        s.background = img::Pixel{255, 255, 255, 255};
    } else if (tok == "bg-black") {
        s.background = img::Pixel{0, 0, 0, 255};
    } else if (tok == "text-white") {
        s.text_color = {255, 255, 255, 255};
    } else if (tok == "text-black") {
        s.text_color = {0, 0, 0, 255};
    } else if (starts_with(tok, "w-")) {
        if (const auto px = scale_value_px(tok.substr(2))) s.width = *px;
    } else if (starts_with(tok, "h-")) {
        if (const auto px = scale_value_px(tok.substr(2))) s.height = *px;
    }
}

// Numeric CSS length: "120px" -> 120; "1.32em" -> em against font_px;
// plain number for line-height.
void apply_inline_declaration(Style& s, std::string_view prop_raw,
                              std::string_view value_raw) {
    const std::string prop = to_lower(trim(prop_raw));
    std::string value = trim(value_raw);
    // The injected overrides carry !important; inline wins anyway here.
    const size_t bang = to_lower(value).find("!important");
    if (bang != std::string::npos) value = trim(value.substr(0, bang));
    const std::string lower = to_lower(value);

    auto as_px = [&](std::string_view v) -> std::optional<int> {
        if (ends_with(v, "px")) v = v.substr(0, v.size() - 2);
        try {
            return int(std::lround(std::stod(std::string(v))));
        } catch (...) {
            return std::nullopt;
        }
    };
    auto as_number = [&](std::string_view v) -> std::optional<double> {
        try {
            return std::stod(std::string(v));
        } catch (...) {
            return std::nullopt;
        }
    };

    if (prop == "position") {
        if (lower == "absolute") s.position = Position::absolute;
        if (lower == "static") s.position = Position::static_flow;
    } else if (prop == "left") {
        s.left = as_px(lower);
    } else if (prop == "top") {
        s.top = as_px(lower);
    } else if (prop == "width") {
        s.width = as_px(lower);
    } else if (prop == "height") {
        s.height = as_px(lower);
    } else if (prop == "letter-spacing") {
        if (ends_with(lower, "em")) {
            if (const auto v = as_number(lower.substr(0, lower.size() - 2)))
                s.letter_spacing_em = *v;
        } else if (const auto px = as_px(lower)) {
            s.letter_spacing_em = double(*px) / double(s.font_px);
        }
    } else if (prop == "line-height") {
        if (ends_with(lower, "em")) {
            if (const auto v = as_number(lower.substr(0, lower.size() - 2)))
                s.line_height = *v;
        } else if (const auto v = as_number(lower)) {
            s.line_height = *v;
        }
    } else if (prop == "font-size") {
        if (const auto px = as_px(lower)) s.font_px = *px;
    } else if (prop == "color") {
        if (const auto c = parse_css_color(lower)) s.text_color = *c;
    } else if (prop == "background" || prop == "background-color") {
        if (const auto c = parse_css_color(lower)) s.background = *c;
    } else if (prop == "opacity") {
        if (const auto v = as_number(lower)) s.opacity = *v;
    } else if (prop == "display") {
        if (lower == "none") s.display = Display::none;
        if (lower == "flex") s.display = Display::flex_row;
        if (lower == "block") s.display = Display::block;
    }
}

void apply_tag_defaults(Style& s, const std::string& tag) {
    // Non-rendered subtrees; in particular <style>/<title> raw text must
    // never reach the canvas.
    if (tag == "head" || tag == "style" || tag == "script" || tag == "title" ||
        tag == "meta" || tag == "link" || tag == "base" || tag == "template" ||
        tag == "noscript") {
        s.display = Display::none;
        return;
    }
    if (tag == "body") {
        s.margin = {8, 8, 8, 8};
    } else if (tag == "h1") {
        s.font_px = 33;
        s.font_weight = 700;
        s.margin = {10, 0, 10, 0};
    } else if (tag == "h2") {
        s.font_px = 27;
        s.font_weight = 700;
        s.margin = {9, 0, 9, 0};
    } else if (tag == "h3") {
        s.font_px = 22;
        s.font_weight = 700;
        s.margin = {8, 0, 8, 0};
    } else if (tag == "p") {
        s.margin = {8, 0, 8, 0};
    } else if (tag == "button") {
        s.padding = {4, 12, 4, 12};
        s.border_width = 1;
        s.border_radius = 4;
    }
}

}  // namespace

int Style::letter_spacing_px() const {
    if (letter_spacing_em == 0.0) return 0;
    const long r = std::lround(letter_spacing_em * font_px);
    if (r != 0) return int(r);
    // Never let a declared offset vanish entirely at small font sizes.
    return letter_spacing_em > 0 ? 1 : -1;
}

int Style::line_height_px() const {
    return int(std::lround(line_height * font_px));
}

Style resolve_style(const html::Node* element) {
    Style s;
    apply_tag_defaults(s, element->tag);
    for (const auto& tok : element->class_tokens()) {
        if (tok.find(':') != std::string::npos) continue;  // variant prefixes
        apply_class_token(s, tok);
    }
    if (const html::Attr* style = element->find_attr("style");
        style && style->has_value) {
        for (const auto& decl : split(style->value, ';')) {
            const size_t colon = decl.find(':');
            if (colon == std::string::npos) continue;
            apply_inline_declaration(s, decl.substr(0, colon), decl.substr(colon + 1));
        }
    }
    return s;
}

std::optional<int> scale_value_px(const std::string& value_token) {
    if (value_token.empty()) return std::nullopt;
    for (char c : value_token) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    return parse_int(value_token) * 4;
}

}  // namespace diffspot::render

#pragma once

#include <array>
#include <optional>
#include <string>

#include "html/dom.hpp"
#include "img/image.hpp"

namespace diffspot::render {

enum class Display { block, flex_row, none };
enum class Position { static_flow, absolute };
enum class Justify { start, center, end, between, around, evenly };

// Resolved style for one element in the builtin renderer. The property set
// is the utility-class vocabulary plus the handful of inline-style
// properties mutations and fixtures use; everything else is ignored.
struct Style {
    Display display = Display::block;
    Position position = Position::static_flow;
    std::optional<int> left, top;       // px, absolute positioning
    std::optional<int> width, height;   // px, border-box
    bool width_full = false;

    std::array<int, 4> margin{0, 0, 0, 0};   // top right bottom left
    std::array<int, 4> padding{0, 0, 0, 0};  // top right bottom left
    int gap_x = 0;
    int gap_y = 0;

    int border_width = 0;
    img::Pixel border_color{107, 114, 128, 255};
    int border_radius = 0;

    std::optional<img::Pixel> background;
    std::optional<int> gradient_dir;  // 0..7 = to-t, tr, r, br, b, bl, l, tl

    img::Pixel text_color{17, 24, 39, 255};
    int font_px = 14;            // glyph cell height in px
    int font_weight = 400;       // 100..900
    double letter_spacing_em = 0.0;
    double line_height = 1.2;    // multiple of font_px
    double opacity = 1.0;

    int translate_x = 0;  // paint/bbox offset, no reflow
    int translate_y = 0;

    Justify justify = Justify::start;

    // Derived pixel quantities.
    int letter_spacing_px() const;
    int line_height_px() const;
    int box_extra_x() const {  // border + padding, both sides
        return 2 * border_width + padding[1] + padding[3];
    }
    int box_extra_y() const {
        return 2 * border_width + padding[0] + padding[2];
    }
};

// Tag defaults -> class tokens (document order) -> inline style attribute.
Style resolve_style(const html::Node* element);

// Spacing scale: utility value token -> px (unit is 4px).
std::optional<int> scale_value_px(const std::string& value_token);

}  // namespace diffspot::render

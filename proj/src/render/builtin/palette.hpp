#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "img/image.hpp"

namespace diffspot::render {

// Color utilities for the builtin renderer. The hue/shade palette is
// generated from HSL ramps; adjacent shades of the same hue always quantize
// to distinct RGB triples so a one-step color swap is visible.
std::optional<img::Pixel> palette_color(std::string_view hue, int shade);

// "#rgb" / "#rrggbb" / a small set of named colors.
std::optional<img::Pixel> parse_css_color(std::string_view text);

img::Pixel lerp_color(img::Pixel a, img::Pixel b, double t);

}  // namespace diffspot::render

#include "render/builtin/palette.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/strings.hpp"

namespace diffspot::render {

namespace {

struct HueSpec {
    double hue;  // degrees
    double sat;
};

const std::map<std::string, HueSpec, std::less<>>& hue_table() {
    static const std::map<std::string, HueSpec, std::less<>> table = {
        {"slate", {215, 0.16}}, {"gray", {220, 0.08}},  {"red", {0, 0.72}},
        {"orange", {25, 0.90}}, {"amber", {38, 0.92}},  {"yellow", {48, 0.89}},
        {"green", {140, 0.64}}, {"emerald", {160, 0.70}}, {"teal", {175, 0.66}},
        {"sky", {200, 0.89}},   {"blue", {221, 0.83}},  {"indigo", {239, 0.74}},
        {"violet", {258, 0.81}}, {"purple", {271, 0.71}}, {"pink", {330, 0.71}},
        {"rose", {350, 0.80}},
    };
    return table;
}

double shade_lightness(int shade) {
    switch (shade) {
        case 100: return 0.93;
        case 200: return 0.85;
        case 300: return 0.76;
        case 400: return 0.64;
        case 500: return 0.54;
        case 600: return 0.45;
        case 700: return 0.37;
        case 800: return 0.28;
        case 900: return 0.20;
        default: return -1.0;
    }
}

uint8_t channel(double v) {
    return uint8_t(std::clamp(std::lround(v * 255.0), 0l, 255l));
}

img::Pixel hsl_to_rgb(double h, double s, double l) {
    const double c = (1.0 - std::abs(2.0 * l - 1.0)) * s;
    const double hp = std::fmod(h / 60.0 + 6.0, 6.0);
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else { r = c; b = x; }
    const double m = l - c / 2.0;
    return {channel(r + m), channel(g + m), channel(b + m), 255};
}

uint8_t hex_nibble(char c) {
    if (c >= '0' && c <= '9') return uint8_t(c - '0');
    if (c >= 'a' && c <= 'f') return uint8_t(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return uint8_t(c - 'A' + 10);
    return 0xff;
}

}  // namespace

std::optional<img::Pixel> palette_color(std::string_view hue, int shade) {
    const auto it = hue_table().find(hue);
    if (it == hue_table().end()) return std::nullopt;
    const double l = shade_lightness(shade);
    if (l < 0) return std::nullopt;
    return hsl_to_rgb(it->second.hue, it->second.sat, l);
}

std::optional<img::Pixel> parse_css_color(std::string_view text) {
    const std::string t = to_lower(trim(text));
    static const std::map<std::string, img::Pixel> named = {
        {"white", {255, 255, 255, 255}}, {"black", {0, 0, 0, 255}},
        {"red", {255, 0, 0, 255}},       {"green", {0, 128, 0, 255}},
        {"blue", {0, 0, 255, 255}},      {"transparent", {0, 0, 0, 0}},
    };
    if (const auto it = named.find(t); it != named.end()) return it->second;
    if (t.size() == 4 && t[0] == '#') {
        const uint8_t r = hex_nibble(t[1]), g = hex_nibble(t[2]), b = hex_nibble(t[3]);
        if (r == 0xff || g == 0xff || b == 0xff) return std::nullopt;
        return img::Pixel{uint8_t(r * 17), uint8_t(g * 17), uint8_t(b * 17), 255};
    }
    if (t.size() == 7 && t[0] == '#') {
        uint8_t v[3];
        for (int i = 0; i < 3; ++i) {
            const uint8_t hi = hex_nibble(t[1 + i * 2]), lo = hex_nibble(t[2 + i * 2]);
            if (hi == 0xff || lo == 0xff) return std::nullopt;
            v[i] = uint8_t(hi << 4 | lo);
        }
        return img::Pixel{v[0], v[1], v[2], 255};
    }
    return std::nullopt;
}

img::Pixel lerp_color(img::Pixel a, img::Pixel b, double t) {
    auto mix = [t](uint8_t x, uint8_t y) {
        return uint8_t(std::clamp(std::lround(x + (double(y) - x) * t), 0l, 255l));
    };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b), mix(a.a, b.a)};
}

}  // namespace diffspot::render

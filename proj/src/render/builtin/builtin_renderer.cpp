#include "render/builtin/builtin_renderer.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "html/selector.hpp"
#include "render/builtin/font_bitmap.hpp"
#include "render/builtin/palette.hpp"
#include "render/builtin/style.hpp"

namespace diffspot::render {

namespace {

// ---------------------------------------------------------------------------
// Text helpers
// ---------------------------------------------------------------------------

// Decodes the common entity references so rendered text matches what a
// browser would draw; unknown entities pass through literally.
std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out += raw[i];
            continue;
        }
        const size_t end = raw.find(';', i);
        if (end == std::string_view::npos || end - i > 9) {
            out += raw[i];
            continue;
        }
        const std::string_view body = raw.substr(i + 1, end - i - 1);
        if (body == "amp") out += '&';
        else if (body == "lt") out += '<';
        else if (body == "gt") out += '>';
        else if (body == "quot") out += '"';
        else if (body == "apos") out += '\'';
        else if (body == "nbsp") out += ' ';
        else if (!body.empty() && body[0] == '#') {
            int code = 0;
            for (size_t k = 1; k < body.size(); ++k) {
                if (!std::isdigit(static_cast<unsigned char>(body[k]))) { code = -1; break; }
                code = code * 10 + (body[k] - '0');
            }
            if (code >= 32 && code < 127) out += char(code);
            else out += '\x01';  // non-ASCII code point: tofu marker
        } else {
            out += raw.substr(i, end - i + 1);
            i = end;
            continue;
        }
        i = end;
    }
    return out;
}

std::string collapse_ws(std::string_view s) {
    std::string out;
    bool in_space = true;  // also trims leading whitespace
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) out += ' ';
            in_space = true;
        } else {
            out += c;
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

int glyph_cell_width(int font_px) {
    return (kGlyphWidth * font_px + kGlyphHeight / 2) / kGlyphHeight;
}

int char_advance(const Style& st) {
    return std::max(1, glyph_cell_width(st.font_px) + st.letter_spacing_px());
}

std::vector<std::string> wrap_text(const std::string& text, const Style& st,
                                   int content_w) {
    std::vector<std::string> lines;
    if (text.empty()) return lines;
    const int advance = char_advance(st);
    const size_t max_chars = size_t(std::max(1, content_w / advance));

    std::string line;
    size_t i = 0;
    while (i < text.size()) {
        size_t sp = text.find(' ', i);
        if (sp == std::string::npos) sp = text.size();
        const std::string_view word(text.data() + i, sp - i);
        const size_t need = line.empty() ? word.size() : line.size() + 1 + word.size();
        if (need <= max_chars || line.empty()) {
            if (!line.empty()) line += ' ';
            line += word;
        } else {
            lines.push_back(line);
            line = std::string(word);
        }
        // A word longer than the line budget hard-wraps.
        while (line.size() > max_chars) {
            lines.push_back(line.substr(0, max_chars));
            line = line.substr(max_chars);
        }
        i = sp + (sp < text.size() ? 1 : 0);
    }
    if (!line.empty()) lines.push_back(line);
    return lines;
}

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

struct NodeInfo {
    Style style;
    ElementGeometry geom{};
    std::vector<std::string> lines;
};

class Engine {
public:
    Engine(const html::Document& doc, const RenderProfile& profile)
        : doc_(doc), vp_w_(profile.viewport_w), vp_h_(profile.viewport_h) {
        for (const html::Node* el : doc_.elements) info_[el].style = resolve_style(el);
    }

    void run() {
        int cursor = 0;
        for (const auto& child : doc_.root->children) {
            if (child->is_element()) {
                cursor += layout_element(child.get(), 0, cursor, vp_w_, 0, 0);
            }
        }
    }

    const std::map<const html::Node*, NodeInfo>& info() const { return info_; }
    int viewport_w() const { return vp_w_; }
    int viewport_h() const { return vp_h_; }
    const html::Document& doc() const { return doc_; }

private:
    NodeInfo& ni(const html::Node* el) { return info_.at(el); }

    // Returns the outer height consumed in the parent's flow.
    int layout_element(const html::Node* el, int x, int y, int avail_w, int ox,
                       int oy) {
        NodeInfo& node = ni(el);
        const Style& st = node.style;
        if (st.display == Display::none) return 0;
        ox += st.translate_x;
        oy += st.translate_y;
        if (st.position == Position::absolute) {
            layout_absolute(el, ox, oy);
            return 0;
        }
        const int bx = x + st.margin[3];
        const int by = y + st.margin[0];
        const int bw = st.width ? *st.width
                                : std::max(0, avail_w - st.margin[1] - st.margin[3]);
        const int content_h = layout_contents(el, bx, by, bw, ox, oy);
        const int bh = st.height ? *st.height : content_h + st.box_extra_y();
        node.geom = {{bx, by, bw, bh}, ox, oy, true};
        return st.margin[0] + bh + st.margin[2];
    }

    void layout_absolute(const html::Node* el, int ox, int oy) {
        NodeInfo& node = ni(el);
        const Style& st = node.style;
        const int bx = st.left.value_or(0);
        const int by = st.top.value_or(0);
        const int bw = st.width      ? *st.width
                       : st.width_full ? vp_w_
                                       : std::min(intrinsic_width(el), vp_w_);
        const int content_h = layout_contents(el, bx, by, bw, ox, oy);
        const int bh = st.height ? *st.height : content_h + st.box_extra_y();
        node.geom = {{bx, by, bw, bh}, ox, oy, true};
    }

    // Lays out text and children inside the border box; returns content
    // height (without padding/border).
    int layout_contents(const html::Node* el, int bx, int by, int bw, int ox,
                        int oy) {
        NodeInfo& node = ni(el);
        const Style& st = node.style;
        const int cx = bx + st.border_width + st.padding[3];
        const int cy = by + st.border_width + st.padding[0];
        const int cw = std::max(1, bw - st.box_extra_x());

        node.lines = wrap_text(collapse_ws(decode_entities(el->own_text())), st, cw);
        int cursor = int(node.lines.size()) * st.line_height_px();

        const auto kids = el->element_children();
        if (st.display == Display::flex_row) {
            cursor += layout_flex_row(kids, cx, cy + cursor, cw, st, ox, oy);
        } else {
            for (const html::Node* kid : kids) {
                cursor += layout_element(kid, cx, cy + cursor, cw, ox, oy);
            }
        }
        return cursor;
    }

    int layout_flex_row(const std::vector<html::Node*>& kids, int cx, int cy,
                        int cw, const Style& parent, int ox, int oy) {
        std::vector<const html::Node*> flow;
        for (const html::Node* kid : kids) {
            const Style& ks = ni(kid).style;
            if (ks.display == Display::none) continue;
            if (ks.position == Position::absolute) {
                layout_absolute(kid, ox + ks.translate_x, oy + ks.translate_y);
                continue;
            }
            flow.push_back(kid);
        }
        if (flow.empty()) return 0;

        std::vector<int> outer_w(flow.size());
        int total = parent.gap_x * int(flow.size() - 1);
        for (size_t i = 0; i < flow.size(); ++i) {
            const Style& ks = ni(flow[i]).style;
            const int inner = ks.width      ? *ks.width
                              : ks.width_full ? cw
                                              : std::min(intrinsic_width(flow[i]), cw);
            outer_w[i] = inner + ks.margin[1] + ks.margin[3];
            total += outer_w[i];
        }
        const int leftover = std::max(0, cw - total);

        int lead = 0, between = 0;
        const int n = int(flow.size());
        switch (parent.justify) {
            case Justify::start: break;
            case Justify::center: lead = leftover / 2; break;
            case Justify::end: lead = leftover; break;
            case Justify::between:
                if (n > 1) between = leftover / (n - 1);
                break;
            case Justify::around:
                lead = leftover / n / 2;
                between = leftover / n;
                break;
            case Justify::evenly:
                lead = leftover / (n + 1);
                between = lead;
                break;
        }

        int x = cx + lead;
        int row_h = 0;
        for (size_t i = 0; i < flow.size(); ++i) {
            // Feed the assigned slot as the available width so the child's
            // own margin math lands it exactly in the slot.
            const int consumed = layout_element(flow[i], x, cy, outer_w[i], ox, oy);
            row_h = std::max(row_h, consumed);
            x += outer_w[i] + parent.gap_x + between;
        }
        return row_h;
    }

    int intrinsic_width(const html::Node* el) {
        const Style& st = ni(el).style;
        if (st.width) return *st.width;
        const std::string text = collapse_ws(decode_entities(el->own_text()));
        int w = int(text.size()) * char_advance(st);
        for (const html::Node* kid : el->element_children()) {
            const Style& ks = ni(kid).style;
            if (ks.display == Display::none) continue;
            w = std::max(w, intrinsic_width(kid) + ks.margin[1] + ks.margin[3]);
        }
        return std::min(w + st.box_extra_x(), vp_w_);
    }

    const html::Document& doc_;
    int vp_w_, vp_h_;
    std::map<const html::Node*, NodeInfo> info_;
};

// ---------------------------------------------------------------------------
// Paint
// ---------------------------------------------------------------------------

// Pixel-center-in-rounded-rect test with pure integer math:
// (2(px-cx)+1)^2 + (2(py-cy)+1)^2 <= (2r)^2 for corner circles.
bool in_rounded_rect(int px, int py, const img::Rect& r, int radius) {
    if (!r.contains(px, py)) return false;
    const int rr = std::min({radius, r.w / 2, r.h / 2});
    if (rr <= 0) return true;
    const int lx = px - r.x, ly = py - r.y;
    const int rx = r.w - 1 - lx, ry = r.h - 1 - ly;
    auto corner = [rr](int dx, int dy) {
        if (dx >= rr || dy >= rr) return true;
        const long long ex = 2ll * (rr - 1 - dx) + 1;
        const long long ey = 2ll * (rr - 1 - dy) + 1;
        return ex * ex + ey * ey <= 4ll * rr * rr;
    };
    return corner(lx, ly) && corner(rx, ly) && corner(lx, ry) && corner(rx, ry);
}

class Painter {
public:
    Painter(const Engine& engine)
        : engine_(engine),
          canvas_(engine.viewport_w(), engine.viewport_h(), {255, 255, 255, 255}) {}

    img::Image run() {
        for (const auto& child : engine_.doc().root->children) {
            if (child->is_element()) paint_element(child.get(), 1.0);
        }
        return std::move(canvas_);
    }

private:
    void blend(int x, int y, img::Pixel color, double alpha) {
        if (x < 0 || y < 0 || x >= canvas_.width() || y >= canvas_.height()) return;
        if (alpha >= 1.0) {
            canvas_.set(x, y, color);
        } else if (alpha > 0.0) {
            canvas_.set(x, y, lerp_color(canvas_.get(x, y), color, alpha));
        }
    }

    void paint_element(const html::Node* el, double parent_opacity) {
        const NodeInfo& node = engine_.info().at(el);
        const Style& st = node.style;
        if (st.display == Display::none || !node.geom.laid_out) return;
        const double eff = std::clamp(parent_opacity * st.opacity, 0.0, 1.0);
        const img::Rect box = node.geom.final_box();

        if (st.gradient_dir) {
            paint_gradient(box, *st.gradient_dir, st.border_radius, eff);
        } else if (st.background) {
            for (int y = box.y; y < box.bottom(); ++y)
                for (int x = box.x; x < box.right(); ++x)
                    if (in_rounded_rect(x, y, box, st.border_radius))
                        blend(x, y, *st.background, eff);
        }

        if (st.border_width > 0) {
            const img::Rect inner{box.x + st.border_width, box.y + st.border_width,
                                  box.w - 2 * st.border_width,
                                  box.h - 2 * st.border_width};
            for (int y = box.y; y < box.bottom(); ++y)
                for (int x = box.x; x < box.right(); ++x)
                    if (!inner.contains(x, y) &&
                        in_rounded_rect(x, y, box, st.border_radius))
                        blend(x, y, st.border_color, eff);
        }

        paint_text(node, box, eff);

        for (const html::Node* kid : el->element_children()) {
            paint_element(kid, eff);
        }
    }

    void paint_gradient(const img::Rect& box, int dir, int radius, double eff) {
        static const int kDir[8][2] = {{0, -1}, {1, -1}, {1, 0},  {1, 1},
                                       {0, 1},  {-1, 1}, {-1, 0}, {-1, -1}};
        const int dx = kDir[dir][0], dy = kDir[dir][1];
        const img::Pixel from = *palette_color("slate", 200);
        const img::Pixel to = *palette_color("slate", 600);
        // Projection range of the rect corners along (dx, dy).
        long long smin = 0, smax = 0;
        bool first = true;
        for (int cy : {box.y, box.bottom() - 1}) {
            for (int cx : {box.x, box.right() - 1}) {
                const long long s = (long long)dx * cx + (long long)dy * cy;
                if (first) { smin = smax = s; first = false; }
                smin = std::min(smin, s);
                smax = std::max(smax, s);
            }
        }
        const double span = double(std::max(1ll, smax - smin));
        for (int y = box.y; y < box.bottom(); ++y) {
            for (int x = box.x; x < box.right(); ++x) {
                if (!in_rounded_rect(x, y, box, radius)) continue;
                const long long s = (long long)dx * x + (long long)dy * y;
                const double t = double(s - smin) / span;
                blend(x, y, lerp_color(from, to, t), eff);
            }
        }
    }

    void paint_text(const NodeInfo& node, const img::Rect& box, double eff) {
        if (node.lines.empty()) return;
        const Style& st = node.style;
        const int line_h = st.line_height_px();
        const int advance = char_advance(st);
        const int cell_w = glyph_cell_width(st.font_px);
        const int cx = box.x + st.border_width + st.padding[3];
        const int cy = box.y + st.border_width + st.padding[0];
        // Heavier weights draw darker; >= 600 also double-strikes.
        const double weight_alpha =
            std::clamp(0.50 + double(st.font_weight) / 1800.0, 0.0, 1.0);
        const double alpha = weight_alpha * eff;
        const bool bold = st.font_weight >= 600;

        for (size_t li = 0; li < node.lines.size(); ++li) {
            const int line_top = cy + int(li) * line_h;
            const int glyph_top = line_top + std::max(0, (line_h - st.font_px) / 2);
            int x = cx;
            for (char ch : node.lines[li]) {
                draw_glyph(ch, x, glyph_top, st.font_px, cell_w, st.text_color, alpha);
                if (bold) {
                    draw_glyph(ch, x + 1, glyph_top, st.font_px, cell_w, st.text_color,
                               alpha);
                }
                x += advance;
            }
        }
    }

    void draw_glyph(char ch, int x, int y, int h, int w, img::Pixel color,
                    double alpha) {
        const unsigned uc = static_cast<unsigned char>(ch);
        if (uc < 32 || uc > 126) {
            // Tofu box for anything outside the compiled glyph set.
            for (int ty = 1; ty + 1 < h; ++ty) {
                for (int tx = 0; tx < w; ++tx) {
                    const bool edge = ty == 1 || ty == h - 2 || tx == 0 || tx == w - 1;
                    if (edge) blend(x + tx, y + ty, color, alpha);
                }
            }
            return;
        }
        const uint8_t* rows = kGlyphRows[uc - kGlyphFirst];
        for (int ty = 0; ty < h; ++ty) {
            const int sy = ty * kGlyphHeight / h;
            const uint8_t row = rows[sy];
            if (!row) continue;
            for (int tx = 0; tx < w; ++tx) {
                const int sx = tx * kGlyphWidth / w;
                if (row & (1u << sx)) blend(x + tx, y + ty, color, alpha);
            }
        }
    }

    const Engine& engine_;
    img::Image canvas_;
};

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

class BuiltinSession : public PageSession {
public:
    BuiltinSession(html::Document doc,
                   std::map<const html::Node*, ElementGeometry> geometry,
                   RenderArtifact artifact, RenderProfile profile)
        : doc_(std::move(doc)),
          geometry_(std::move(geometry)),
          artifact_(std::move(artifact)),
          profile_(profile) {}

    const RenderArtifact& artifact() const override { return artifact_; }

    Bbox query_bbox(const std::string& selector) override {
        const auto matches = html::select_all(doc_, selector);
        Bbox out;
        if (matches.empty()) return out;  // resolved = false
        out.resolved = true;
        out.unique = matches.size() == 1;
        const auto it = geometry_.find(matches.front());
        if (it == geometry_.end() || !it->second.laid_out) {
            // Null rectangle (e.g. display:none): resolved with zero area.
            out.rect = {0, 0, 0, 0};
            out.unclamped = {0, 0, 0, 0};
            return out;
        }
        out.unclamped = it->second.final_box();
        out.rect = img::clamp_to(out.unclamped, profile_.viewport_w,
                                 profile_.viewport_h);
        if (out.rect.empty()) out.rect = {out.rect.x, out.rect.y, 0, 0};
        return out;
    }

private:
    html::Document doc_;
    std::map<const html::Node*, ElementGeometry> geometry_;
    RenderArtifact artifact_;
    RenderProfile profile_;
};

}  // namespace

BuiltinRenderer::BuiltinRenderer(RenderProfile profile) : profile_(profile) {}

std::unique_ptr<PageSession> BuiltinRenderer::render_page(const std::string& html) {
    html::Document doc = html::parse(html);
    Engine engine(doc, profile_);
    engine.run();
    Painter painter(engine);
    img::Image shot = painter.run();

    RenderArtifact artifact;
    artifact.render_hash = shot.content_hash();
    artifact.screenshot = std::move(shot);

    std::map<const html::Node*, ElementGeometry> geometry;
    for (const auto& [el, info] : engine.info()) geometry[el] = info.geom;
    return std::make_unique<BuiltinSession>(std::move(doc), std::move(geometry),
                                            std::move(artifact), profile_);
}

std::map<const html::Node*, ElementGeometry> layout_document(
    const html::Document& doc, const RenderProfile& profile) {
    Engine engine(doc, profile);
    engine.run();
    std::map<const html::Node*, ElementGeometry> out;
    for (const auto& [el, info] : engine.info()) out[el] = info.geom;
    return out;
}

}  // namespace diffspot::render

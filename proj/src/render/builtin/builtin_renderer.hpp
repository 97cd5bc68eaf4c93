#pragma once

#include <map>
#include <memory>
#include <string>

#include "html/dom.hpp"
#include "img/geometry.hpp"
#include "render/renderer.hpp"

namespace diffspot::render {

// Deterministic software renderer for self-contained pages written in the
// utility-class vocabulary. It implements a block/flex-row box model with
// border-box sizing, bitmap text, backgrounds, gradients, borders, rounded
// corners, opacity and translate offsets — the exact property set the
// mutation operators act on. Pure function of the input bytes: no clock, no
// network, no fonts beyond the compiled-in glyphs.
//
// Known simplifications (documented, stable): every element is block-level
// (no inline flow), style sheets in <style> are ignored in favor of utility
// classes, and absolute positioning is viewport-relative.
class BuiltinRenderer : public Renderer {
public:
    explicit BuiltinRenderer(RenderProfile profile = {});
    std::unique_ptr<PageSession> render_page(const std::string& html) override;
    const RenderProfile& profile() const override { return profile_; }
    std::string name() const override { return "builtin"; }

private:
    RenderProfile profile_;
};

// Geometry computed for one element: border box in flow coordinates plus the
// cumulative translate offset applied at paint time (and reflected in bbox
// queries, as getBoundingClientRect does for transforms).
struct ElementGeometry {
    img::Rect border_box{};
    int offset_x = 0;
    int offset_y = 0;
    bool laid_out = false;

    img::Rect final_box() const {
        return {border_box.x + offset_x, border_box.y + offset_y, border_box.w,
                border_box.h};
    }
};

// Exposed for tests: full layout pass without painting.
std::map<const html::Node*, ElementGeometry> layout_document(
    const html::Document& doc, const RenderProfile& profile);

}  // namespace diffspot::render

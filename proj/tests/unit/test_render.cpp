#include <doctest.h>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "html/dom.hpp"
#include "html/selector.hpp"
#include "img/diff.hpp"
#include "mutate/class_scales.hpp"
#include "mutate/mutator.hpp"
#include "mutate/operators.hpp"
#include "render/builtin/builtin_renderer.hpp"
#include "render/builtin/palette.hpp"
#include "render/builtin/style.hpp"
#include "render/orchestrator.hpp"

using namespace diffspot;
using namespace diffspot::render;

namespace {

std::string page(const std::string& body) {
    return "<!DOCTYPE html><html><head><title>t</title></head><body>" + body +
           "</body></html>";
}

size_t full_canvas_diff(const img::Image& a, const img::Image& b) {
    const img::DiffMask mask =
        img::pixel_diff(a, b, img::Rect{0, 0, a.width(), a.height()});
    return mask.changed_total();
}

// Renderer wrapper that counts render_page calls.
class CountingRenderer : public Renderer {
public:
    explicit CountingRenderer(Renderer& inner) : inner_(inner) {}
    std::unique_ptr<PageSession> render_page(const std::string& html) override {
        ++calls;
        return inner_.render_page(html);
    }
    const RenderProfile& profile() const override { return inner_.profile(); }
    std::string name() const override { return inner_.name(); }
    int calls = 0;

private:
    Renderer& inner_;
};

// Renderer whose output depends on an internal counter: every render differs.
class FlakyRenderer : public Renderer {
public:
    class Session : public PageSession {
    public:
        explicit Session(int salt) : artifact_{img::Image(2, 2), ""} {
            artifact_.screenshot.set(0, 0, {uint8_t(salt), 0, 0, 255});
            artifact_.render_hash = artifact_.screenshot.content_hash();
        }
        const RenderArtifact& artifact() const override { return artifact_; }
        Bbox query_bbox(const std::string&) override { return {}; }

    private:
        RenderArtifact artifact_;
    };

    std::unique_ptr<PageSession> render_page(const std::string&) override {
        return std::make_unique<Session>(counter_++);
    }
    const RenderProfile& profile() const override { return profile_; }
    std::string name() const override { return "flaky"; }

private:
    int counter_ = 0;
    RenderProfile profile_;
};

}  // namespace

// ===========================================================================
// Style resolution
// ===========================================================================

TEST_CASE("resolve_style: tag defaults") {
    const html::Document doc =
        html::parse(page("<h1>A</h1><p>B</p><button>C</button>"));
    const auto h1 = html::select_all(doc, "h1");
    const auto p = html::select_all(doc, "p");
    const auto button = html::select_all(doc, "button");
    const auto body = html::select_all(doc, "body");
    REQUIRE(h1.size() == 1);

    const Style sh1 = resolve_style(h1[0]);
    CHECK(sh1.font_px == 33);
    CHECK(sh1.font_weight == 700);

    const Style sp = resolve_style(p[0]);
    CHECK(sp.margin == std::array<int, 4>{8, 0, 8, 0});
    CHECK(sp.font_px == 14);
    CHECK(sp.font_weight == 400);
    CHECK(sp.line_height == doctest::Approx(1.2));

    const Style sb = resolve_style(button[0]);
    CHECK(sb.border_width == 1);
    CHECK(sb.border_radius == 4);
    CHECK(sb.padding == std::array<int, 4>{4, 12, 4, 12});

    CHECK(resolve_style(body[0]).margin == std::array<int, 4>{8, 8, 8, 8});
}

TEST_CASE("resolve_style: non-rendered tags are display none") {
    const html::Document doc = html::parse(
        "<html><head><title>Page</title><style>.x { color: red }</style>"
        "</head><body><script>let a = 1;</script><p>ok</p></body></html>");
    for (const char* sel : {"head", "title", "style", "script"}) {
        const auto matched = html::select_all(doc, sel);
        REQUIRE(matched.size() == 1);
        CHECK(resolve_style(matched[0]).display == Display::none);
    }
    CHECK(resolve_style(html::select_all(doc, "p")[0]).display == Display::block);
}

TEST_CASE("resolve_style: utility class tokens") {
    const html::Document doc = html::parse(page(
        "<div class='p-4 m-2 bg-blue-500 text-gray-700 text-2xl font-semibold "
        "opacity-50 rounded-lg border-2 translate-x-8 translate-y-4 "
        "justify-center flex gap-2 hover:bg-red-500'>x</div>"));
    const Style s = resolve_style(html::select_all(doc, "div")[0]);

    CHECK(s.padding == std::array<int, 4>{16, 16, 16, 16});
    CHECK(s.margin == std::array<int, 4>{8, 8, 8, 8});
    CHECK(s.background == palette_color("blue", 500));
    CHECK(s.text_color == *palette_color("gray", 700));
    CHECK(s.font_px == 22);       // text-2xl
    CHECK(s.font_weight == 600);  // font-semibold
    CHECK(s.opacity == doctest::Approx(0.5));
    CHECK(s.border_radius == 8);  // rounded-lg
    CHECK(s.border_width == 2);
    CHECK(s.translate_x == 32);
    CHECK(s.translate_y == 16);
    CHECK(s.justify == Justify::center);
    CHECK(s.display == Display::flex_row);
    CHECK(s.gap_x == 8);
    CHECK(s.gap_y == 8);
    // hover: variant must not leak into the base style (bg stays blue).
    CHECK(s.background == palette_color("blue", 500));
}

TEST_CASE("resolve_style: font size and weight ladders") {
    const int expected_px[10] = {10, 12, 14, 16, 18, 22, 27, 33, 42, 54};
    const auto* axis = mutate::ClassScales::builtin().axes_for("font_size");
    REQUIRE(axis != nullptr);
    REQUIRE(axis->size() == 1);
    std::set<int> seen;
    for (size_t i = 0; i < (*axis)[0].tokens.size(); ++i) {
        const html::Document doc =
            html::parse(page("<div class='" + (*axis)[0].tokens[i] + "'>x</div>"));
        const Style s = resolve_style(html::select_all(doc, "div")[0]);
        CHECK(s.font_px == expected_px[i]);
        seen.insert(s.font_px);
    }
    CHECK(seen.size() == 10);  // all sizes render distinctly

    const auto* weights = mutate::ClassScales::builtin().axes_for("font_weight");
    REQUIRE(weights != nullptr);
    for (size_t i = 0; i < (*weights)[0].tokens.size(); ++i) {
        const html::Document doc = html::parse(
            page("<div class='" + (*weights)[0].tokens[i] + "'>x</div>"));
        CHECK(resolve_style(html::select_all(doc, "div")[0]).font_weight ==
              int(i + 1) * 100);
    }
}

TEST_CASE("resolve_style: inline declarations") {
    const html::Document doc = html::parse(page(
        "<div style='position: absolute; left: 40px; top: 60px; width: 120px; "
        "height: 30px; letter-spacing: 0.12em !important; line-height: 1.32em; "
        "color: #ff0000; background: #00ff00; opacity: 0.25'>x</div>"));
    const Style s = resolve_style(html::select_all(doc, "div")[0]);
    CHECK(s.position == Position::absolute);
    CHECK(s.left == 40);
    CHECK(s.top == 60);
    CHECK(s.width == 120);
    CHECK(s.height == 30);
    CHECK(s.letter_spacing_em == doctest::Approx(0.12));
    CHECK(s.line_height == doctest::Approx(1.32));
    CHECK(s.text_color == img::Pixel{255, 0, 0, 255});
    CHECK(s.background == img::Pixel{0, 255, 0, 255});
    CHECK(s.opacity == doctest::Approx(0.25));
}

TEST_CASE("resolve_style: inline beats class for the same property") {
    const html::Document doc = html::parse(
        page("<div class='text-lg' style='font-size: 40px'>x</div>"));
    CHECK(resolve_style(html::select_all(doc, "div")[0]).font_px == 40);
}

TEST_CASE("letter_spacing_px never rounds a declared offset to zero") {
    Style s;
    s.font_px = 14;
    s.letter_spacing_em = 0.0;
    CHECK(s.letter_spacing_px() == 0);
    s.letter_spacing_em = 0.06;  // 0.84px: rounds to 1, must not vanish
    CHECK(s.letter_spacing_px() == 1);
    s.letter_spacing_em = -0.06;
    CHECK(s.letter_spacing_px() == -1);
    s.letter_spacing_em = 0.01;  // 0.14px
    CHECK(s.letter_spacing_px() == 1);
    s.font_px = 54;
    s.letter_spacing_em = 0.12;  // 6.48 -> 6
    CHECK(s.letter_spacing_px() == 6);
}

TEST_CASE("scale_value_px") {
    CHECK(scale_value_px("0") == 0);
    CHECK(scale_value_px("4") == 16);
    CHECK(scale_value_px("24") == 96);
    CHECK_FALSE(scale_value_px("full").has_value());
    CHECK_FALSE(scale_value_px("").has_value());
}

// ===========================================================================
// Layout geometry
// ===========================================================================

TEST_CASE("layout: absolute boxes land exactly where authored") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(page(
        "<div id='a' class='bg-blue-500' style='position: absolute; left: 100px; "
        "top: 50px; width: 200px; height: 80px'></div>"
        "<div id='b' class='bg-red-500' style='position: absolute; left: 40px; "
        "top: 600px; width: 64px; height: 32px'></div>"));

    const Bbox a = session->query_bbox("#a");
    CHECK(a.resolved);
    CHECK(a.unique);
    CHECK(a.rect == img::Rect{100, 50, 200, 80});
    CHECK(a.unclamped == img::Rect{100, 50, 200, 80});

    const Bbox b = session->query_bbox("#b");
    CHECK(b.rect == img::Rect{40, 600, 64, 32});

    // The painted pixels match the geometry edge for edge.
    const img::Image& shot = session->artifact().screenshot;
    const img::Pixel blue = *palette_color("blue", 500);
    const img::Pixel white{255, 255, 255, 255};
    CHECK(shot.get(100, 50) == blue);
    CHECK(shot.get(299, 129) == blue);
    CHECK(shot.get(99, 50) == white);
    CHECK(shot.get(300, 129) == white);
    CHECK(shot.get(150, 49) == white);
    CHECK(shot.get(150, 130) == white);
}

TEST_CASE("layout: flow box model (margins, border, padding, text height)") {
    const html::Document doc = html::parse(page(
        "<div id='card' class='m-4 p-4 border-2'><p id='t'>Hi</p></div>"));
    const auto geometry = layout_document(doc, RenderProfile{});

    const html::Node* card = html::select_all(doc, "#card")[0];
    const html::Node* t = html::select_all(doc, "#t")[0];

    // body starts at (8, 8) and is 1264 wide (viewport 1280 minus margins).
    // card adds m-4 = 16: box at (24, 24), width 1264 - 32 = 1232.
    // Inside: border 2 + padding 16, so content starts at (42, 42).
    // The <p> has margin 8 0: box at (42, 50), one 17px text line
    // (line-height 1.2 * 14px rounds to 17).
    // card height = content (8 + 17 + 8) + border/padding (2*2 + 32) = 69.
    CHECK(geometry.at(card).final_box() == img::Rect{24, 24, 1232, 69});
    CHECK(geometry.at(t).final_box() == img::Rect{42, 50, 1196, 17});
}

TEST_CASE("layout: translate offsets shift the final box without reflow") {
    const html::Document doc = html::parse(page(
        "<div id='m' class='translate-x-8 translate-y-4' style='position: "
        "absolute; left: 10px; top: 20px; width: 30px; height: 12px'></div>"
        "<div id='n' style='position: absolute; left: 10px; top: 40px; width: "
        "30px; height: 12px'></div>"));
    const auto geometry = layout_document(doc, RenderProfile{});
    const html::Node* m = html::select_all(doc, "#m")[0];
    const html::Node* n = html::select_all(doc, "#n")[0];

    CHECK(geometry.at(m).border_box == img::Rect{10, 20, 30, 12});
    CHECK(geometry.at(m).final_box() == img::Rect{42, 36, 30, 12});
    // The untranslated sibling is unaffected.
    CHECK(geometry.at(n).final_box() == img::Rect{10, 40, 30, 12});
}

TEST_CASE("layout: translate offsets accumulate into children") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(page(
        "<div class='translate-x-4' style='position: absolute; left: 100px; "
        "top: 100px; width: 200px; height: 100px'>"
        "<div id='kid' class='translate-y-2' style='position: absolute; "
        "left: 120px; top: 110px; width: 10px; height: 10px'></div></div>"));
    // Parent shifts +16 in x, child adds +8 in y; both apply to the child.
    const Bbox kid = session->query_bbox("#kid");
    CHECK(kid.rect == img::Rect{136, 118, 10, 10});
}

TEST_CASE("layout: flex row with justify-center") {
    const html::Document doc = html::parse(page(
        "<div id='row' class='flex justify-center' style='position: absolute; "
        "left: 0px; top: 0px; width: 200px; height: 40px'>"
        "<div id='c1' class='w-10 h-5 bg-red-500'></div>"
        "<div id='c2' class='w-10 h-5 bg-blue-500'></div></div>"));
    const auto geometry = layout_document(doc, RenderProfile{});
    const html::Node* c1 = html::select_all(doc, "#c1")[0];
    const html::Node* c2 = html::select_all(doc, "#c2")[0];

    // w-10 = 40px children in a 200px row: leftover 120, lead 60.
    CHECK(geometry.at(c1).final_box() == img::Rect{60, 0, 40, 20});
    CHECK(geometry.at(c2).final_box() == img::Rect{100, 0, 40, 20});
}

TEST_CASE("layout: justify distributions are all distinct") {
    std::set<int> first_child_x;
    for (const char* j : {"justify-start", "justify-center", "justify-end",
                          "justify-between", "justify-around", "justify-evenly"}) {
        const html::Document doc = html::parse(page(
            "<div class='flex " + std::string(j) +
            "' style='position: absolute; left: 0px; top: 0px; width: 200px; "
            "height: 40px'>"
            "<div id='c1' class='w-10 h-5'></div>"
            "<div id='c2' class='w-10 h-5'></div></div>"));
        const auto geometry = layout_document(doc, RenderProfile{});
        const html::Node* c1 = html::select_all(doc, "#c1")[0];
        const html::Node* c2 = html::select_all(doc, "#c2")[0];
        first_child_x.insert(geometry.at(c1).final_box().x * 1000 +
                             geometry.at(c2).final_box().x);
    }
    // Every justify value produces a different child arrangement, so a
    // justify swap is always visible when children have backgrounds.
    CHECK(first_child_x.size() == 6);
}

TEST_CASE("layout: hidden element is not laid out and has zero-area bbox") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(
        page("<div id='h' class='hidden'>gone</div><p id='v'>here</p>"));
    const Bbox h = session->query_bbox("#h");
    CHECK(h.resolved);
    CHECK(h.unique);
    CHECK(h.rect.area() == 0);
    CHECK(session->query_bbox("#v").rect.area() > 0);
}

TEST_CASE("bbox: zero matches vs multiple matches vs bad selector") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(
        page("<div class='dup'>a</div><div class='dup'>b</div>"));

    const Bbox none = session->query_bbox(".nope");
    CHECK_FALSE(none.resolved);

    const Bbox dup = session->query_bbox(".dup");
    CHECK(dup.resolved);
    CHECK_FALSE(dup.unique);
    CHECK(dup.rect.area() > 0);  // first match in document order

    CHECK_THROWS_AS((void)session->query_bbox("div["), Error);
}

TEST_CASE("bbox: viewport clamping keeps the unclamped extent") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(page(
        "<div id='wide' class='bg-red-500' style='position: absolute; "
        "left: 1200px; top: 0px; width: 200px; height: 40px'></div>"
        "<div id='deep' class='bg-blue-500' style='position: absolute; "
        "left: 0px; top: 700px; width: 50px; height: 400px'></div>"));

    const Bbox wide = session->query_bbox("#wide");
    CHECK(wide.unclamped == img::Rect{1200, 0, 200, 40});
    CHECK(wide.rect == img::Rect{1200, 0, 80, 40});

    const Bbox deep = session->query_bbox("#deep");
    CHECK(deep.unclamped == img::Rect{0, 700, 50, 400});
    CHECK(deep.rect == img::Rect{0, 700, 50, 100});
}

TEST_CASE("layout: w-full flex child consumes the content width") {
    const html::Document doc = html::parse(page(
        "<div class='flex' style='position: absolute; left: 0px; top: 0px; "
        "width: 300px'><div id='f' class='w-full h-5'></div></div>"));
    const auto geometry = layout_document(doc, RenderProfile{});
    CHECK(geometry.at(html::select_all(doc, "#f")[0]).final_box() ==
          img::Rect{0, 0, 300, 20});
}

// ===========================================================================
// Painting
// ===========================================================================

TEST_CASE("paint: blank page is a white canvas at viewport size") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page("<html><body></body></html>");
    const img::Image& shot = session->artifact().screenshot;
    REQUIRE(shot.width() == 1280);
    REQUIRE(shot.height() == 800);
    bool all_white = true;
    for (int y = 0; y < shot.height() && all_white; ++y)
        for (int x = 0; x < shot.width(); ++x)
            if (shot.get(x, y) != img::Pixel{255, 255, 255, 255}) {
                all_white = false;
                break;
            }
    CHECK(all_white);
    CHECK(session->artifact().render_hash == shot.content_hash());
}

TEST_CASE("paint: screenshot size is locked to the profile viewport") {
    RenderProfile small;
    small.viewport_w = 64;
    small.viewport_h = 48;
    BuiltinRenderer renderer(small);
    // Content much taller than the viewport does not grow the canvas.
    auto session = renderer.render_page(page(
        "<div style='position: absolute; left: 0px; top: 0px; width: 10px; "
        "height: 4000px' class='bg-red-500'></div>"));
    CHECK(session->artifact().screenshot.width() == 64);
    CHECK(session->artifact().screenshot.height() == 48);
}

TEST_CASE("paint: opacity blends against the backdrop") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(page(
        "<div class='bg-black opacity-50' style='position: absolute; "
        "left: 10px; top: 10px; width: 40px; height: 20px'></div>"));
    const img::Pixel p = session->artifact().screenshot.get(20, 15);
    // 50% black over white: mid gray on every channel.
    CHECK(p.r == p.g);
    CHECK(p.g == p.b);
    CHECK(p.r >= 126);
    CHECK(p.r <= 129);
}

TEST_CASE("paint: gradient runs light to dark along its direction") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(page(
        "<div class='bg-gradient-to-r' style='position: absolute; left: 0px; "
        "top: 0px; width: 200px; height: 40px'></div>"));
    const img::Image& shot = session->artifact().screenshot;
    const img::Pixel left = shot.get(2, 20);
    const img::Pixel right = shot.get(197, 20);
    // to-r: slate-200 (light) on the left toward slate-600 (dark).
    CHECK(int(left.r) + left.g + left.b > int(right.r) + right.g + right.b);

    // Opposite direction flips the ramp.
    auto session2 = renderer.render_page(page(
        "<div class='bg-gradient-to-l' style='position: absolute; left: 0px; "
        "top: 0px; width: 200px; height: 40px'></div>"));
    const img::Image& shot2 = session2->artifact().screenshot;
    CHECK(int(shot2.get(2, 20).r) < int(shot2.get(197, 20).r));
}

TEST_CASE("paint: all eight gradient directions are pairwise distinct") {
    BuiltinRenderer renderer;
    std::set<std::string> hashes;
    const auto* axis = mutate::ClassScales::builtin().axes_for("gradient");
    REQUIRE(axis != nullptr);
    for (const std::string& tok : (*axis)[0].tokens) {
        auto session = renderer.render_page(page(
            "<div class='" + tok + "' style='position: absolute; left: 0px; "
            "top: 0px; width: 200px; height: 80px'></div>"));
        hashes.insert(session->artifact().render_hash);
    }
    CHECK(hashes.size() == 8);
}

TEST_CASE("paint: rounded corners carve the background") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(page(
        "<div class='bg-blue-500 rounded-xl' style='position: absolute; "
        "left: 0px; top: 0px; width: 80px; height: 80px'></div>"));
    const img::Image& shot = session->artifact().screenshot;
    const img::Pixel blue = *palette_color("blue", 500);
    CHECK(shot.get(0, 0) == img::Pixel{255, 255, 255, 255});  // corner cut
    CHECK(shot.get(40, 0) == blue);                           // edge center kept
    CHECK(shot.get(0, 40) == blue);
    CHECK(shot.get(40, 40) == blue);
    CHECK(shot.get(79, 79) == img::Pixel{255, 255, 255, 255});
}

TEST_CASE("paint: border ring sits between box edge and interior") {
    BuiltinRenderer renderer;
    auto session = renderer.render_page(page(
        "<div class='border-4' style='position: absolute; left: 10px; "
        "top: 10px; width: 60px; height: 40px'></div>"));
    const img::Image& shot = session->artifact().screenshot;
    const img::Pixel border{107, 114, 128, 255};
    CHECK(shot.get(10, 10) == border);   // outer edge
    CHECK(shot.get(12, 30) == border);   // within the 4px ring
    CHECK(shot.get(40, 30) == img::Pixel{255, 255, 255, 255});  // interior
    CHECK(shot.get(9, 10) == img::Pixel{255, 255, 255, 255});   // outside
}

TEST_CASE("paint: text marks pixels and heavier weight marks more") {
    BuiltinRenderer renderer;
    auto count_dark = [&](const std::string& cls) {
        auto session = renderer.render_page(page(
            "<div class='" + cls + "' style='position: absolute; left: 0px; "
            "top: 0px; width: 400px; height: 60px'>Weight sample text</div>"));
        const img::Image& shot = session->artifact().screenshot;
        size_t dark = 0;
        for (int y = 0; y < 60; ++y)
            for (int x = 0; x < 400; ++x)
                if (shot.get(x, y).r < 250) ++dark;
        return dark;
    };
    const size_t thin = count_dark("font-thin");
    const size_t bold = count_dark("font-bold");
    CHECK(thin > 0);
    CHECK(bold > thin);  // double-strike widens every glyph
}

TEST_CASE("paint: entity references render like their literal characters") {
    BuiltinRenderer renderer;
    auto a = renderer.render_page(page("<p>Fish &amp; Chips &gt; Salad</p>"));
    auto b = renderer.render_page(page("<p>Fish & Chips > Salad</p>"));
    CHECK(a->artifact().render_hash == b->artifact().render_hash);
}

TEST_CASE("paint: non-ASCII text draws tofu boxes (visible, deterministic)") {
    BuiltinRenderer renderer;
    auto with = renderer.render_page(page("<p>\xEC\x95\x88\xEB\x85\x95</p>"));
    auto without = renderer.render_page(page("<p></p>"));
    CHECK(with->artifact().render_hash != without->artifact().render_hash);
    auto again = renderer.render_page(page("<p>\xEC\x95\x88\xEB\x85\x95</p>"));
    CHECK(with->artifact().render_hash == again->artifact().render_hash);
}

TEST_CASE("paint: style sheet text never reaches the canvas") {
    BuiltinRenderer renderer;
    auto plain = renderer.render_page("<html><body><p>x</p></body></html>");
    auto with_css = renderer.render_page(
        "<html><head><style>body { background: url(x) } .a { color: red }"
        "</style><title>Very long page title text</title></head>"
        "<body><p>x</p></body></html>");
    CHECK(plain->artifact().render_hash == with_css->artifact().render_hash);
}

// ===========================================================================
// Determinism and orchestration
// ===========================================================================

TEST_CASE("render: byte-identical output across repeated renders") {
    BuiltinRenderer renderer;
    const std::string html = page(
        "<h1 class='text-2xl font-bold text-blue-700'>Title</h1>"
        "<div class='flex justify-between p-4 bg-gray-100 rounded-lg border-2'>"
        "<div class='w-10 h-10 bg-red-500 rounded-full'></div>"
        "<p class='font-medium'>Some wrapped paragraph text that is long "
        "enough to span multiple lines at the default size.</p></div>");
    auto a = renderer.render_page(html);
    auto b = renderer.render_page(html);
    CHECK(a->artifact().render_hash == b->artifact().render_hash);
    CHECK(a->artifact().screenshot == b->artifact().screenshot);
}

TEST_CASE("render_pair: distinct documents, resolved bboxes") {
    BuiltinRenderer inner;
    CountingRenderer renderer(inner);
    const std::string before = page(
        "<div id='t' class='bg-blue-500' style='position: absolute; left: 50px; "
        "top: 50px; width: 100px; height: 40px'></div>");
    const std::string after = page(
        "<div id='t' class='bg-blue-900' style='position: absolute; left: 50px; "
        "top: 50px; width: 100px; height: 40px'></div>");

    const PairRender pair = render_pair(renderer, before, after, "#t");
    CHECK(renderer.calls == 2);
    CHECK(pair.before->render_hash != pair.after->render_hash);
    CHECK(pair.bbox_before.resolved);
    CHECK(pair.bbox_after.resolved);
    CHECK(pair.bbox_before.rect == pair.bbox_after.rect);
    CHECK(full_canvas_diff(pair.before->screenshot, pair.after->screenshot) > 0);
}

TEST_CASE("render_group: the before render is shared, not repeated") {
    BuiltinRenderer inner;
    CountingRenderer renderer(inner);
    const std::string before = page(
        "<div id='t' class='bg-blue-500' style='position: absolute; left: 50px; "
        "top: 50px; width: 100px; height: 40px'></div>");
    std::vector<std::string> afters;
    for (const char* shade : {"bg-blue-100", "bg-blue-300", "bg-blue-900"}) {
        afters.push_back(page(
            "<div id='t' class='" + std::string(shade) +
            "' style='position: absolute; left: 50px; top: 50px; width: 100px; "
            "height: 40px'></div>"));
    }

    const auto pairs = render_group(renderer, before, afters, "#t");
    REQUIRE(pairs.size() == 3);
    CHECK(renderer.calls == 4);  // 1 before + 3 afters
    CHECK(pairs[0].before.get() == pairs[1].before.get());
    CHECK(pairs[1].before.get() == pairs[2].before.get());
    for (const auto& pair : pairs) {
        CHECK(pair.before->render_hash != pair.after->render_hash);
        CHECK(pair.bbox_before.rect == img::Rect{50, 50, 100, 40});
    }
}

TEST_CASE("double_render_audit: deterministic renderer passes") {
    BuiltinRenderer renderer;
    std::vector<std::pair<std::string, std::string>> pages;
    for (int i = 0; i < 5; ++i) {
        pages.emplace_back("page-" + std::to_string(i),
                           page("<h1>Page " + std::to_string(i) + "</h1>" +
                                "<p class='p-4 bg-gray-200'>body text</p>"));
    }
    const AuditReport report = double_render_audit(renderer, pages);
    CHECK(report.total() == 5);
    CHECK(report.identical_count == 5);
    CHECK(report.passed());
    for (const auto& entry : report.entries) {
        CHECK(entry.identical);
        CHECK(entry.hash_first == entry.hash_second);
        CHECK(entry.changed_pixels == 0);
    }
}

TEST_CASE("double_render_audit: flaky renderer is caught with pixel counts") {
    FlakyRenderer renderer;
    const AuditReport report =
        double_render_audit(renderer, {{"p1", "<html/>"}, {"p2", "<html/>"}});
    CHECK(report.identical_count == 0);
    CHECK_FALSE(report.passed());
    for (const auto& entry : report.entries) {
        CHECK_FALSE(entry.identical);
        CHECK(entry.changed_pixels == 1);  // the salted pixel
    }
}

TEST_CASE("AuditReport::passed threshold arithmetic") {
    AuditReport report;
    for (int i = 0; i < 20; ++i) {
        AuditEntry e;
        e.identical = i != 0;  // 19 of 20
        report.identical_count += e.identical ? 1 : 0;
        report.entries.push_back(e);
    }
    CHECK(report.passed(0.95));  // 19 >= 0.95 * 20
    report.entries[1].identical = false;
    report.identical_count -= 1;  // 18 of 20
    CHECK_FALSE(report.passed(0.95));
    CHECK(AuditReport{}.passed() == false);  // empty audit never passes
}

// ===========================================================================
// Operators x renderer soundness: every emitted candidate is visible
// ===========================================================================

namespace {

// Per-operator fixture pages: the target is an absolutely positioned leaf so
// the mutation's pixel effect is confined to its own (union) bbox.
std::string leaf_fixture(const std::string& op_name) {
    const std::string abs_box =
        "position: absolute; left: 200px; top: 100px; width: 240px;";
    if (op_name == "font_weight")
        return page("<div id='t' class='font-medium' style='" + abs_box +
                    "'>Weight sample line</div>");
    if (op_name == "font_size")
        return page("<div id='t' class='text-lg' style='" + abs_box +
                    "'>Size sample</div>");
    if (op_name == "letter_spacing" || op_name == "line_height")
        return page("<div id='t' style='" + abs_box +
                    "'>Spacing sample text that wraps across lines for "
                    "height sensitivity</div>");
    if (op_name == "text")
        return page("<div id='t' style='" + abs_box +
                    "'>Readable sentence with many letters to edit</div>");
    if (op_name == "color")
        return page("<div id='t' class='bg-blue-500' style='" + abs_box +
                    " height: 80px'></div>");
    if (op_name == "opacity")
        return page("<div id='t' class='bg-black opacity-50' style='" + abs_box +
                    " height: 80px'></div>");
    if (op_name == "gradient")
        return page("<div id='t' class='bg-gradient-to-r' style='" + abs_box +
                    " height: 80px'></div>");
    if (op_name == "position")
        return page("<div id='t' class='translate-x-8 bg-red-500' style='" +
                    abs_box + " height: 40px'></div>");
    if (op_name == "spacing")
        return page("<div id='t' class='p-4 bg-gray-200' style='" + abs_box +
                    "'>Padded content</div>");
    if (op_name == "justify")
        return page("<div id='t' class='flex justify-center' style='" + abs_box +
                    " height: 40px'><div class='w-10 h-5 bg-red-500'></div>"
                    "<div class='w-10 h-5 bg-blue-500'></div></div>");
    if (op_name == "border")
        return page("<div id='t' class='border-8' style='" + abs_box +
                    " height: 80px'></div>");
    if (op_name == "rounded")
        return page("<div id='t' class='bg-blue-500 rounded-lg' style='" +
                    abs_box + " height: 80px'></div>");
    return {};
}

}  // namespace

TEST_CASE("every operator's grouped candidates change pixels on screen") {
    BuiltinRenderer renderer;
    const auto& scales = mutate::ClassScales::builtin();

    for (const mutate::Operator& op : mutate::all_operators()) {
        CAPTURE(op.name);
        const std::string before = leaf_fixture(op.name);
        REQUIRE_FALSE(before.empty());

        const mutate::GroupResult group =
            mutate::mutate_grouped(before, op, 0xC0FFEE ^ fnv1a64(op.name), scales);
        REQUIRE(group.status == mutate::MutateStatus::ok);
        REQUIRE_FALSE(group.candidates.empty());

        std::vector<std::string> afters;
        for (const auto& cand : group.candidates) afters.push_back(cand.html);
        const auto pairs = render_group(renderer, before, afters, group.selector);

        for (size_t i = 0; i < pairs.size(); ++i) {
            CAPTURE(group.candidates[i].tier);
            CAPTURE(group.candidates[i].record.new_value);
            const size_t changed = full_canvas_diff(pairs[i].before->screenshot,
                                                    pairs[i].after->screenshot);
            CHECK(changed > 0);
            CHECK(pairs[i].bbox_before.resolved);
            CHECK(pairs[i].bbox_after.resolved);
        }
    }
}

#pragma once

#include <memory>
#include <string>

#include "img/geometry.hpp"
#include "img/image.hpp"

namespace diffspot::render {

// Settings that must be identical for two renders to be comparable.
struct RenderProfile {
    int viewport_w = 1280;
    int viewport_h = 800;
    // Settle condition for browser-backed rendering: wait for load + fonts,
    // freeze animations/timers, then this many quiet frames before capture.
    int quiet_frames = 2;
    int navigation_timeout_ms = 30000;
};

struct RenderArtifact {
    img::Image screenshot;
    std::string render_hash;  // content hash of the pixel buffer

    int width() const { return screenshot.width(); }
    int height() const { return screenshot.height(); }
};

// Geometry of a selector resolved against a rendered page. `rect` is rounded
// outward to integer device pixels and clamped to the viewport; `unclamped`
// keeps the full extent for the overflow post-filter.
struct Bbox {
    bool resolved = false;
    bool unique = false;
    img::Rect rect{};
    img::Rect unclamped{};
};

// A rendered page that can still answer bbox queries. Sessions are owned by
// exactly one job at a time.
class PageSession {
public:
    virtual ~PageSession() = default;
    virtual const RenderArtifact& artifact() const = 0;
    // Zero matches -> resolved = false. Selector syntax errors throw
    // Error(ErrorCode::invalid).
    virtual Bbox query_bbox(const std::string& selector) = 0;
};

class Renderer {
public:
    virtual ~Renderer() = default;
    virtual std::unique_ptr<PageSession> render_page(const std::string& html) = 0;
    virtual const RenderProfile& profile() const = 0;
    virtual std::string name() const = 0;
};

}  // namespace diffspot::render

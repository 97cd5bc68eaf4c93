#pragma once

#include <deque>
#include <memory>
#include <string>

#include <json.hpp>

#include "net/websocket.hpp"
#include "render/renderer.hpp"

namespace diffspot::render {

// Location of a DevTools websocket endpoint.
struct CdpEndpoint {
    std::string host;  // IPv4 literal ("localhost" is mapped to 127.0.0.1)
    uint16_t port = 0;
    std::string path;  // "/devtools/page/<id>" or similar
};

// Parses "ws://host:port/path". Throws Error(ErrorCode::config) on anything
// else. For an http:// DevTools root, resolve_browser_endpoint first.
CdpEndpoint parse_ws_endpoint(const std::string& url);

// Queries GET /json/version on an http endpoint and returns the advertised
// webSocketDebuggerUrl.
std::string resolve_browser_endpoint(const std::string& http_url);

// Request/response + event stream over one DevTools websocket connection.
class CdpConnection {
public:
    explicit CdpConnection(const CdpEndpoint& endpoint, int timeout_ms = 30000);

    // Sends {id, method, params}, returns the matching "result" object.
    // DevTools "error" replies raise Error(ErrorCode::transport).
    nlohmann::json command(const std::string& method,
                           const nlohmann::json& params = nlohmann::json::object());

    // Waits for a specific event method, buffering unrelated traffic.
    nlohmann::json wait_event(const std::string& method, int timeout_ms);

    void close();

private:
    nlohmann::json next_message(int timeout_ms);

    net::WebSocket ws_;
    int timeout_ms_;
    int next_id_ = 1;
    std::deque<nlohmann::json> pending_events_;
};

// Renders through a real browser over the DevTools protocol. Each
// render_page drives one navigation on a fresh connection: viewport
// override, navigate to a data: URL, settle (load + fonts + animation
// freeze + two-frame quiet period), then full-viewport screenshot.
class CdpRenderer : public Renderer {
public:
    CdpRenderer(std::string ws_url, RenderProfile profile = {});
    std::unique_ptr<PageSession> render_page(const std::string& html) override;
    const RenderProfile& profile() const override { return profile_; }
    std::string name() const override { return "cdp"; }

    // The page-side settle script, exposed for tests.
    static std::string settle_script(int quiet_frames);
    static std::string bbox_script(const std::string& selector);

private:
    std::string ws_url_;
    RenderProfile profile_;
};

}  // namespace diffspot::render

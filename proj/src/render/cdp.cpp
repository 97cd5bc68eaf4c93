#include "render/cdp.hpp"

#include <httplib.h>

#include "core/base64.hpp"
#include "core/error.hpp"
#include "core/strings.hpp"
#include "img/png.hpp"

namespace diffspot::render {

namespace {

[[noreturn]] void render_fail(const std::string& what) {
    throw Error(ErrorCode::transport, "cdp: " + what);
}

}  // namespace

CdpEndpoint parse_ws_endpoint(const std::string& url) {
    if (!starts_with(url, "ws://")) {
        throw Error(ErrorCode::config, "browser endpoint must be ws://: " + url);
    }
    const std::string rest = url.substr(5);
    const size_t slash = rest.find('/');
    const std::string hostport = rest.substr(0, slash);
    CdpEndpoint ep;
    ep.path = slash == std::string::npos ? "/" : rest.substr(slash);
    const size_t colon = hostport.rfind(':');
    if (colon == std::string::npos) {
        ep.host = hostport;
        ep.port = 80;
    } else {
        ep.host = hostport.substr(0, colon);
        try {
            ep.port = uint16_t(std::stoi(hostport.substr(colon + 1)));
        } catch (...) {
            throw Error(ErrorCode::config, "bad port in endpoint: " + url);
        }
    }
    if (ep.host == "localhost") ep.host = "127.0.0.1";
    if (ep.host.empty()) throw Error(ErrorCode::config, "empty host in endpoint");
    return ep;
}

std::string resolve_browser_endpoint(const std::string& http_url) {
    httplib::Client client(http_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(10);
    const auto res = client.Get("/json/version");
    if (!res || res->status != 200) {
        render_fail("GET /json/version failed on " + http_url);
    }
    try {
        const auto doc = nlohmann::json::parse(res->body);
        return doc.at("webSocketDebuggerUrl").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        render_fail(std::string("bad /json/version payload: ") + e.what());
    }
}

CdpConnection::CdpConnection(const CdpEndpoint& endpoint, int timeout_ms)
    : ws_(net::WebSocket::connect(endpoint.host, endpoint.port, endpoint.path,
                                  timeout_ms)),
      timeout_ms_(timeout_ms) {}

nlohmann::json CdpConnection::next_message(int timeout_ms) {
    const auto text = ws_.recv_text(timeout_ms);
    if (!text) render_fail("connection closed by browser");
    try {
        return nlohmann::json::parse(*text);
    } catch (const nlohmann::json::exception& e) {
        render_fail(std::string("non-JSON frame: ") + e.what());
    }
}

nlohmann::json CdpConnection::command(const std::string& method,
                                      const nlohmann::json& params) {
    const int id = next_id_++;
    nlohmann::json request{{"id", id}, {"method", method}, {"params", params}};
    ws_.send_text(request.dump());
    for (;;) {
        nlohmann::json msg = next_message(timeout_ms_);
        if (msg.contains("id") && msg["id"] == id) {
            if (msg.contains("error")) {
                render_fail(method + " failed: " + msg["error"].dump());
            }
            return msg.value("result", nlohmann::json::object());
        }
        if (msg.contains("method")) pending_events_.push_back(std::move(msg));
        // Replies to other ids are dropped (none are outstanding here).
    }
}

nlohmann::json CdpConnection::wait_event(const std::string& method, int timeout_ms) {
    for (auto it = pending_events_.begin(); it != pending_events_.end(); ++it) {
        if ((*it)["method"] == method) {
            nlohmann::json out = std::move(*it);
            pending_events_.erase(it);
            return out;
        }
    }
    for (;;) {
        nlohmann::json msg = next_message(timeout_ms);
        if (msg.contains("method")) {
            if (msg["method"] == method) return msg;
            pending_events_.push_back(std::move(msg));
        }
    }
}

void CdpConnection::close() { ws_.close(); }

std::string CdpRenderer::settle_script(int quiet_frames) {
    // Freezes animation/transition timing, waits for fonts, then lets the
    // requested number of frames pass with no work scheduled.
    std::string frames_chain = "Promise.resolve()";
    for (int i = 0; i < quiet_frames; ++i) {
        frames_chain += ".then(() => new Promise(r => requestAnimationFrame(r)))";
    }
    return "(() => {"
           "const s = document.createElement('style');"
           "s.textContent = '*, *::before, *::after {"
           " animation: none !important; transition: none !important;"
           " caret-color: transparent !important; }';"
           "document.documentElement.appendChild(s);"
           "const fonts = document.fonts && document.fonts.ready"
           " ? document.fonts.ready : Promise.resolve();"
           "return fonts.then(() => " + frames_chain + ").then(() => 'settled');"
           "})()";
}

std::string CdpRenderer::bbox_script(const std::string& selector) {
    const std::string quoted = nlohmann::json(selector).dump();
    return "(() => {"
           "let list;"
           "try { list = document.querySelectorAll(" + quoted + "); }"
           "catch (e) { return {error: 'selector'}; }"
           "if (list.length === 0) return {resolved: false};"
           "const r = list[0].getBoundingClientRect();"
           "const x = Math.floor(r.left), y = Math.floor(r.top);"
           "return {resolved: true, unique: list.length === 1,"
           " x: x, y: y, w: Math.ceil(r.right) - x, h: Math.ceil(r.bottom) - y};"
           "})()";
}

namespace {

class CdpSession : public PageSession {
public:
    CdpSession(std::unique_ptr<CdpConnection> conn, RenderArtifact artifact,
               RenderProfile profile)
        : conn_(std::move(conn)),
          artifact_(std::move(artifact)),
          profile_(profile) {}

    ~CdpSession() override {
        try {
            conn_->close();
        } catch (...) {
        }
    }

    const RenderArtifact& artifact() const override { return artifact_; }

    Bbox query_bbox(const std::string& selector) override {
        const auto result = conn_->command(
            "Runtime.evaluate", {{"expression", CdpRenderer::bbox_script(selector)},
                                 {"returnByValue", true}});
        const auto value = result.at("result").value("value", nlohmann::json());
        if (!value.is_object()) render_fail("bbox query returned no value");
        if (value.contains("error")) {
            throw Error(ErrorCode::invalid, "invalid selector: " + selector);
        }
        Bbox out;
        out.resolved = value.value("resolved", false);
        if (!out.resolved) return out;
        out.unique = value.value("unique", false);
        out.unclamped = {value.value("x", 0), value.value("y", 0),
                         value.value("w", 0), value.value("h", 0)};
        out.rect =
            img::clamp_to(out.unclamped, profile_.viewport_w, profile_.viewport_h);
        return out;
    }

private:
    std::unique_ptr<CdpConnection> conn_;
    RenderArtifact artifact_;
    RenderProfile profile_;
};

}  // namespace

CdpRenderer::CdpRenderer(std::string ws_url, RenderProfile profile)
    : ws_url_(std::move(ws_url)), profile_(profile) {}

std::unique_ptr<PageSession> CdpRenderer::render_page(const std::string& html) {
    auto conn = std::make_unique<CdpConnection>(parse_ws_endpoint(ws_url_),
                                                profile_.navigation_timeout_ms);

    conn->command("Emulation.setDeviceMetricsOverride",
                  {{"width", profile_.viewport_w},
                   {"height", profile_.viewport_h},
                   {"deviceScaleFactor", 1},
                   {"mobile", false}});
    conn->command("Page.enable");

    const std::string url =
        "data:text/html;base64," + base64_encode(std::string_view(html));
    conn->command("Page.navigate", {{"url", url}});
    conn->wait_event("Page.loadEventFired", profile_.navigation_timeout_ms);

    const auto settled =
        conn->command("Runtime.evaluate", {{"expression", settle_script(profile_.quiet_frames)},
                                           {"awaitPromise", true},
                                           {"returnByValue", true}});
    const auto settle_value = settled.value("result", nlohmann::json::object())
                                  .value("value", std::string());
    if (settle_value != "settled") render_fail("settle script did not complete");

    const auto shot = conn->command("Page.captureScreenshot", {{"format", "png"}});
    const std::string b64 = shot.value("data", std::string());
    if (b64.empty()) render_fail("empty screenshot");
    const std::vector<uint8_t> png_bytes = base64_decode(b64);

    RenderArtifact artifact;
    artifact.screenshot = img::png_decode(png_bytes);
    if (artifact.screenshot.width() != profile_.viewport_w ||
        artifact.screenshot.height() != profile_.viewport_h) {
        render_fail("screenshot size " + std::to_string(artifact.screenshot.width()) +
                    "x" + std::to_string(artifact.screenshot.height()) +
                    " does not match the viewport");
    }
    artifact.render_hash = artifact.screenshot.content_hash();
    return std::make_unique<CdpSession>(std::move(conn), std::move(artifact),
                                        profile_);
}

}  // namespace diffspot::render

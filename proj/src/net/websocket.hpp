#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace diffspot::net {

// Minimal RFC 6455 websocket over a blocking TCP socket: text and close
// frames, client masking, continuation reassembly, all payload-length
// encodings. Enough to speak the Chrome DevTools Protocol and to script a
// mock endpoint in tests; not a general-purpose server.

// Computes the Sec-WebSocket-Accept value for a handshake key.
std::string websocket_accept_key(const std::string& sec_websocket_key);

class WebSocket {
public:
    ~WebSocket();
    WebSocket(WebSocket&&) noexcept;
    WebSocket& operator=(WebSocket&&) noexcept;

    // Client connect + HTTP upgrade to ws://host:port/path. Throws
    // Error(ErrorCode::transport) on refusal or a bad handshake.
    static WebSocket connect(const std::string& host, uint16_t port,
                             const std::string& path, int timeout_ms = 10000);

    // Wraps an already-upgraded socket (server side of the mock).
    static WebSocket from_fd(int fd, bool client_role);

    void send_text(const std::string& payload);
    // Next text message, reassembling continuations and answering pings.
    // nullopt on clean close; throws Error(transport) on socket errors or
    // timeout.
    std::optional<std::string> recv_text(int timeout_ms = 30000);
    void close();
    bool is_open() const;

private:
    WebSocket();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-connection listener used by tests to script a websocket peer.
class WebSocketListener {
public:
    // Binds 127.0.0.1 on an ephemeral port.
    WebSocketListener();
    ~WebSocketListener();
    uint16_t port() const;
    // Blocks for a client, performs the server handshake, returns the socket.
    WebSocket accept(int timeout_ms = 10000);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace diffspot::net

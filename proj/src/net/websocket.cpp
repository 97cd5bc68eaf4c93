#include "net/websocket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <random>
#include <vector>

#include "core/base64.hpp"
#include "core/error.hpp"
#include "core/strings.hpp"
#include "net/sha1.hpp"

namespace diffspot::net {

namespace {

constexpr const char* kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

[[noreturn]] void transport_fail(const std::string& what) {
    throw Error(ErrorCode::transport, "websocket: " + what);
}

void set_timeout(int fd, int timeout_ms) {
    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void write_all(int fd, const uint8_t* data, size_t n) {
    size_t off = 0;
    while (off < n) {
        const ssize_t w = ::send(fd, data + off, n - off, MSG_NOSIGNAL);
        if (w <= 0) transport_fail("send failed");
        off += size_t(w);
    }
}

// Reads exactly n bytes; returns false on clean EOF at a message boundary.
bool read_exact(int fd, uint8_t* out, size_t n) {
    size_t off = 0;
    while (off < n) {
        const ssize_t r = ::recv(fd, out + off, n - off, 0);
        if (r == 0) {
            if (off == 0) return false;
            transport_fail("connection closed mid-frame");
        }
        if (r < 0) transport_fail("recv failed or timed out");
        off += size_t(r);
    }
    return true;
}

std::string read_http_head(int fd) {
    std::string head;
    uint8_t c;
    while (head.find("\r\n\r\n") == std::string::npos) {
        if (!read_exact(fd, &c, 1)) transport_fail("peer closed during handshake");
        head += char(c);
        if (head.size() > 64 * 1024) transport_fail("oversized handshake");
    }
    return head;
}

std::string header_value(const std::string& head, const std::string& name) {
    const std::string lower_head = to_lower(head);
    const std::string needle = "\r\n" + to_lower(name) + ":";
    const size_t at = lower_head.find(needle);
    if (at == std::string::npos) return "";
    const size_t begin = at + needle.size();
    const size_t end = lower_head.find("\r\n", begin);
    return trim(head.substr(begin, end - begin));
}

}  // namespace

std::string websocket_accept_key(const std::string& sec_websocket_key) {
    const auto digest = sha1(sec_websocket_key + kGuid);
    return base64_encode(digest.data(), digest.size());
}

struct WebSocket::Impl {
    int fd = -1;
    bool client_role = true;
    bool open = false;
    uint32_t mask_counter = 0x12345678;

    void send_frame(uint8_t opcode, const std::string& payload) {
        std::vector<uint8_t> frame;
        frame.push_back(uint8_t(0x80 | opcode));  // FIN set
        const size_t n = payload.size();
        const uint8_t mask_bit = client_role ? 0x80 : 0x00;
        if (n < 126) {
            frame.push_back(uint8_t(mask_bit | n));
        } else if (n <= 0xFFFF) {
            frame.push_back(mask_bit | 126);
            frame.push_back(uint8_t(n >> 8));
            frame.push_back(uint8_t(n));
        } else {
            frame.push_back(mask_bit | 127);
            for (int i = 7; i >= 0; --i) frame.push_back(uint8_t(uint64_t(n) >> (i * 8)));
        }
        if (client_role) {
            // Mask bytes only need to vary per frame, not be unpredictable.
            mask_counter = mask_counter * 1664525u + 1013904223u;
            uint8_t mask[4] = {uint8_t(mask_counter >> 24), uint8_t(mask_counter >> 16),
                               uint8_t(mask_counter >> 8), uint8_t(mask_counter)};
            frame.insert(frame.end(), mask, mask + 4);
            const size_t base = frame.size();
            frame.resize(base + n);
            for (size_t i = 0; i < n; ++i)
                frame[base + i] = uint8_t(payload[i]) ^ mask[i % 4];
        } else {
            frame.insert(frame.end(), payload.begin(), payload.end());
        }
        write_all(fd, frame.data(), frame.size());
    }

    struct Frame {
        bool fin = false;
        uint8_t opcode = 0;
        std::string payload;
        bool eof = false;
    };

    Frame read_frame() {
        Frame f;
        uint8_t hdr[2];
        if (!read_exact(fd, hdr, 2)) {
            f.eof = true;
            return f;
        }
        f.fin = (hdr[0] & 0x80) != 0;
        f.opcode = hdr[0] & 0x0F;
        const bool masked = (hdr[1] & 0x80) != 0;
        uint64_t len = hdr[1] & 0x7F;
        if (len == 126) {
            uint8_t ext[2];
            if (!read_exact(fd, ext, 2)) transport_fail("truncated length");
            len = uint64_t(ext[0]) << 8 | ext[1];
        } else if (len == 127) {
            uint8_t ext[8];
            if (!read_exact(fd, ext, 8)) transport_fail("truncated length");
            len = 0;
            for (int i = 0; i < 8; ++i) len = len << 8 | ext[i];
        }
        if (len > (256ull << 20)) transport_fail("frame too large");
        uint8_t mask[4] = {0, 0, 0, 0};
        if (masked && !read_exact(fd, mask, 4)) transport_fail("truncated mask");
        f.payload.resize(size_t(len));
        if (len > 0 &&
            !read_exact(fd, reinterpret_cast<uint8_t*>(f.payload.data()), size_t(len))) {
            transport_fail("truncated payload");
        }
        if (masked) {
            for (size_t i = 0; i < f.payload.size(); ++i)
                f.payload[i] = char(uint8_t(f.payload[i]) ^ mask[i % 4]);
        }
        return f;
    }
};

WebSocket::WebSocket() : impl_(std::make_unique<Impl>()) {}
WebSocket::~WebSocket() {
    if (impl_ && impl_->fd >= 0) ::close(impl_->fd);
}
WebSocket::WebSocket(WebSocket&&) noexcept = default;
WebSocket& WebSocket::operator=(WebSocket&&) noexcept = default;

WebSocket WebSocket::connect(const std::string& host, uint16_t port,
                             const std::string& path, int timeout_ms) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) transport_fail("socket() failed");
    set_timeout(fd, timeout_ms);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        transport_fail("unsupported host (IPv4 literal expected): " + host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        transport_fail("connect to " + host + ":" + std::to_string(port) + " failed");
    }
    const int one = 1;
    setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

    // Handshake key: random is fine, does not need to be cryptographic.
    std::mt19937_64 gen(std::random_device{}());
    uint8_t key_bytes[16];
    for (auto& b : key_bytes) b = uint8_t(gen());
    const std::string key = base64_encode(key_bytes, sizeof(key_bytes));

    const std::string request = "GET " + path +
                                " HTTP/1.1\r\n"
                                "Host: " + host + ":" + std::to_string(port) +
                                "\r\n"
                                "Upgrade: websocket\r\n"
                                "Connection: Upgrade\r\n"
                                "Sec-WebSocket-Key: " + key +
                                "\r\n"
                                "Sec-WebSocket-Version: 13\r\n\r\n";
    write_all(fd, reinterpret_cast<const uint8_t*>(request.data()), request.size());

    const std::string head = read_http_head(fd);
    if (head.find(" 101 ") == std::string::npos) {
        ::close(fd);
        transport_fail("handshake rejected: " + head.substr(0, head.find("\r\n")));
    }
    if (header_value(head, "Sec-WebSocket-Accept") != websocket_accept_key(key)) {
        ::close(fd);
        transport_fail("bad Sec-WebSocket-Accept");
    }

    WebSocket ws;
    ws.impl_->fd = fd;
    ws.impl_->client_role = true;
    ws.impl_->open = true;
    return ws;
}

WebSocket WebSocket::from_fd(int fd, bool client_role) {
    WebSocket ws;
    ws.impl_->fd = fd;
    ws.impl_->client_role = client_role;
    ws.impl_->open = true;
    return ws;
}

void WebSocket::send_text(const std::string& payload) {
    if (!impl_->open) transport_fail("send on closed socket");
    impl_->send_frame(0x1, payload);
}

std::optional<std::string> WebSocket::recv_text(int timeout_ms) {
    if (!impl_->open) return std::nullopt;
    set_timeout(impl_->fd, timeout_ms);
    std::string assembled;
    bool in_message = false;
    for (;;) {
        Impl::Frame f = impl_->read_frame();
        if (f.eof) {
            impl_->open = false;
            return std::nullopt;
        }
        switch (f.opcode) {
            case 0x1:  // text
            case 0x2:  // binary (treated as text payload)
                assembled = std::move(f.payload);
                in_message = !f.fin;
                break;
            case 0x0:  // continuation
                if (!in_message) transport_fail("unexpected continuation");
                assembled += f.payload;
                in_message = !f.fin;
                break;
            case 0x8:  // close
                impl_->send_frame(0x8, "");
                impl_->open = false;
                return std::nullopt;
            case 0x9:  // ping
                impl_->send_frame(0xA, f.payload);
                continue;
            case 0xA:  // pong
                continue;
            default:
                transport_fail("unsupported opcode " + std::to_string(f.opcode));
        }
        if (!in_message) return assembled;
    }
}

void WebSocket::close() {
    if (impl_->open) {
        try {
            impl_->send_frame(0x8, "");
        } catch (const Error&) {
            // Peer may already be gone; closing is best-effort.
        }
        impl_->open = false;
    }
}

bool WebSocket::is_open() const { return impl_->open; }

struct WebSocketListener::Impl {
    int fd = -1;
    uint16_t port = 0;
};

WebSocketListener::WebSocketListener() : impl_(std::make_unique<Impl>()) {
    impl_->fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (impl_->fd < 0) transport_fail("socket() failed");
    const int one = 1;
    setsockopt(impl_->fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(impl_->fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        transport_fail("bind failed");
    }
    socklen_t len = sizeof(addr);
    getsockname(impl_->fd, reinterpret_cast<sockaddr*>(&addr), &len);
    impl_->port = ntohs(addr.sin_port);
    if (::listen(impl_->fd, 4) != 0) transport_fail("listen failed");
}

WebSocketListener::~WebSocketListener() {
    if (impl_ && impl_->fd >= 0) ::close(impl_->fd);
}

uint16_t WebSocketListener::port() const { return impl_->port; }

WebSocket WebSocketListener::accept(int timeout_ms) {
    set_timeout(impl_->fd, timeout_ms);
    const int fd = ::accept(impl_->fd, nullptr, nullptr);
    if (fd < 0) transport_fail("accept failed or timed out");
    set_timeout(fd, timeout_ms);

    const std::string head = read_http_head(fd);
    const std::string key = header_value(head, "Sec-WebSocket-Key");
    if (key.empty()) {
        ::close(fd);
        transport_fail("missing Sec-WebSocket-Key");
    }
    const std::string response =
        "HTTP/1.1 101 Switching Protocols\r\n"
        "Upgrade: websocket\r\n"
        "Connection: Upgrade\r\n"
        "Sec-WebSocket-Accept: " + websocket_accept_key(key) + "\r\n\r\n";
    write_all(fd, reinterpret_cast<const uint8_t*>(response.data()), response.size());
    return WebSocket::from_fd(fd, /*client_role=*/false);
}

}  // namespace diffspot::net

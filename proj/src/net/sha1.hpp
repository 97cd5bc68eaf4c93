#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace diffspot::net {

// SHA-1 digest (needed for the RFC 6455 websocket handshake accept key;
// not used for anything security-sensitive).
std::array<uint8_t, 20> sha1(std::string_view data);

}  // namespace diffspot::net

#pragma once

#include <stdexcept>
#include <string>

namespace diffspot {

// Coarse failure classes. These map 1:1 onto the C API status codes and,
// through them, onto CLI exit behavior.
enum class ErrorCode {
    ok = 0,
    partial = 1,
    config = 2,
    io = 3,
    state = 4,      // missing upstream artifact, wrong stage order
    transport = 5,  // endpoint unreachable / non-conforming
    invalid = 6,    // bad argument
    internal = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ok: return "ok";
        case ErrorCode::partial: return "partial";
        case ErrorCode::config: return "config";
        case ErrorCode::io: return "io";
        case ErrorCode::state: return "state";
        case ErrorCode::transport: return "transport";
        case ErrorCode::invalid: return "invalid";
        case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

}  // namespace diffspot

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "net/rate_limiter.hpp"

namespace diffspot::net {

// "http://host:port/some/path" -> {"http://host:port", "/some/path"}
struct SplitUrl {
    std::string origin;
    std::string path;
};
SplitUrl split_url(const std::string& url);

struct RetryPolicy {
    int max_attempts = 4;  // 1 initial try + 3 retries
    std::chrono::milliseconds initial_backoff{250};
    double backoff_multiplier = 2.0;
    std::chrono::milliseconds max_backoff{4000};
    // Injectable for tests; defaults to a real sleep.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct HttpClientConfig {
    std::string base_url;          // scheme://host[:port]
    std::string bearer_token;      // empty = no Authorization header
    double timeout_sec = 120.0;
    RetryPolicy retry;
    std::shared_ptr<TokenBucket> rate_limiter;  // optional, shared per endpoint
};

// JSON-over-HTTP client with exponential-backoff retries. Transient failures
// (connection errors, 429, 5xx) are retried; other non-2xx statuses fail
// immediately. Exhausted retries raise Error(ErrorCode::transport).
class JsonHttpClient {
public:
    explicit JsonHttpClient(HttpClientConfig config);
    ~JsonHttpClient();

    JsonHttpClient(const JsonHttpClient&) = delete;
    JsonHttpClient& operator=(const JsonHttpClient&) = delete;

    nlohmann::json post_json(const std::string& path, const nlohmann::json& body);

    // Attempts made by the last post_json call (visible for tests/telemetry).
    int last_attempt_count() const { return last_attempts_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int last_attempts_ = 0;
};

}  // namespace diffspot::net

#include "net/http_client.hpp"

#include <thread>

#include <httplib.h>

#include "core/error.hpp"

namespace diffspot::net {

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::config, "URL missing scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

namespace {

bool transient_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

struct JsonHttpClient::Impl {
    HttpClientConfig config;
    httplib::Client client;

    explicit Impl(HttpClientConfig cfg) : config(std::move(cfg)), client(config.base_url) {
        const auto timeout =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::duration<double>(config.timeout_sec));
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        if (!config.bearer_token.empty()) {
            client.set_bearer_token_auth(config.bearer_token);
        }
        if (!config.retry.sleep) {
            config.retry.sleep = [](std::chrono::milliseconds d) {
                std::this_thread::sleep_for(d);
            };
        }
    }
};

JsonHttpClient::JsonHttpClient(HttpClientConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

JsonHttpClient::~JsonHttpClient() = default;

nlohmann::json JsonHttpClient::post_json(const std::string& path,
                                         const nlohmann::json& body) {
    const RetryPolicy& retry = impl_->config.retry;
    const std::string payload = body.dump();
    auto backoff = retry.initial_backoff;
    std::string last_failure = "no attempt made";

    last_attempts_ = 0;
    for (int attempt = 1; attempt <= retry.max_attempts; ++attempt) {
        last_attempts_ = attempt;
        if (impl_->config.rate_limiter) {
            impl_->config.rate_limiter->acquire();
        }

        auto result = impl_->client.Post(path, payload, "application/json");
        if (!result) {
            last_failure = "connection error: " + httplib::to_string(result.error());
        } else if (result->status >= 200 && result->status < 300) {
            try {
                return nlohmann::json::parse(result->body);
            } catch (const nlohmann::json::parse_error& e) {
                throw Error(ErrorCode::transport,
                            "non-JSON response from " + impl_->config.base_url + path +
                                ": " + e.what());
            }
        } else if (transient_status(result->status)) {
            last_failure = "HTTP " + std::to_string(result->status);
        } else {
            throw Error(ErrorCode::transport,
                        "HTTP " + std::to_string(result->status) + " from " +
                            impl_->config.base_url + path + ": " + result->body);
        }

        if (attempt < retry.max_attempts) {
            retry.sleep(backoff);
            backoff = std::min(
                retry.max_backoff,
                std::chrono::milliseconds(static_cast<long long>(
                    static_cast<double>(backoff.count()) * retry.backoff_multiplier)));
        }
    }

    throw Error(ErrorCode::transport,
                "request to " + impl_->config.base_url + path + " failed after " +
                    std::to_string(retry.max_attempts) + " attempts (" + last_failure + ")");
}

}  // namespace diffspot::net

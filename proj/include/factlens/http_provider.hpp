#pragma once

// OpenAI-compatible chat-completion client over HTTP(S).

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"
#include "json.hpp"

#include "factlens/error.hpp"
#include "factlens/providers.hpp"

namespace factlens {

// Spaces request starts so at most `per_minute` begin in any minute.
class RateLimiter {
public:
    explicit RateLimiter(int per_minute) : per_minute_(per_minute) {}

    void acquire() {
        if (per_minute_ <= 0) return;
        using clock = std::chrono::steady_clock;
        const auto interval = std::chrono::duration_cast<clock::duration>(std::chrono::minutes(1)) / per_minute_;
        clock::time_point slot;
        {
            std::lock_guard lock(mu_);
            auto now = clock::now();
            slot = std::max(now, next_);
            next_ = slot + interval;
        }
        std::this_thread::sleep_until(slot);
    }

private:
    int per_minute_;
    std::mutex mu_;
    std::chrono::steady_clock::time_point next_{};
};

// Bounds the number of requests in flight.
class InFlightLimit {
public:
    explicit InFlightLimit(int limit) : available_(std::max(1, limit)) {}

    class Slot {
    public:
        explicit Slot(InFlightLimit& l) : l_(l) { l_.acquire(); }
        ~Slot() { l_.release(); }
        Slot(const Slot&) = delete;
        Slot& operator=(const Slot&) = delete;

    private:
        InFlightLimit& l_;
    };

private:
    void acquire() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return available_ > 0; });
        --available_;
    }
    void release() {
        {
            std::lock_guard lock(mu_);
            ++available_;
        }
        cv_.notify_one();
    }

    std::mutex mu_;
    std::condition_variable cv_;
    int available_;
};

// "https://host:8080/v1" -> {"https://host:8080", "/v1"}
inline std::pair<std::string, std::string> split_base_url(const std::string& base) {
    auto scheme = base.find("://");
    auto path = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path == std::string::npos) return {base, ""};
    std::string prefix = base.substr(path);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base.substr(0, path), prefix};
}

inline bool is_retryable_status(int status) noexcept {
    return status == 408 || status == 409 || status == 429 || status >= 500;
}

// POSTs a JSON payload with retry/backoff, rate cap and in-flight bound.
// Returns the 2xx body. Transport failures and retryable statuses are retried
// up to config.max_retries times.
class HttpJsonClient {
public:
    explicit HttpJsonClient(ProviderConfig config)
        : config_(std::move(config)), limiter_(config_.requests_per_minute), in_flight_(config_.max_in_flight) {
        config_.validate();
        if (config_.api_base.empty()) throw ConfigError("provider api_base is empty (set FACTLENS_API_BASE)");
    }

    const ProviderConfig& config() const noexcept { return config_; }

    std::string post(const std::string& route, const std::string& payload) {
        std::string last_error;
        bool transport_failure = false;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            if (attempt > 0) std::this_thread::sleep_for(backoff(attempt));
            limiter_.acquire();
            InFlightLimit::Slot slot(in_flight_);

            auto [host, prefix] = split_base_url(config_.api_base);
            httplib::Client client(host);
            client.set_connection_timeout(config_.timeout_seconds, 0);
            client.set_read_timeout(config_.timeout_seconds, 0);
            client.set_write_timeout(config_.timeout_seconds, 0);
            if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

            auto res = client.Post(prefix + route, payload, "application/json");
            if (!res) {
                transport_failure = true;
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            transport_failure = false;
            if (res->status < 200 || res->status >= 300) {
                last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300);
                if (is_retryable_status(res->status)) continue;
                throw ProviderError(last_error);
            }
            return res->body;
        }
        if (transport_failure) throw TransportError(last_error + " (retries exhausted)");
        throw ProviderError(last_error + " (retries exhausted)");
    }

    // initial * 2^(attempt-1), capped.
    std::chrono::milliseconds backoff(int attempt) const {
        long long ms = static_cast<long long>(config_.backoff_initial_ms) << std::min(attempt - 1, 20);
        return std::chrono::milliseconds(std::min<long long>(ms, config_.backoff_max_ms));
    }

private:
    ProviderConfig config_;
    RateLimiter limiter_;
    InFlightLimit in_flight_;
};

class HttpChatProvider final : public ChatProvider {
public:
    explicit HttpChatProvider(ProviderConfig config) : client_(std::move(config)) {}

    std::string id() const override { return "http:" + client_.config().api_base; }

    std::string complete(const ChatRequest& request) override {
        validate_request(request);
        nlohmann::json body = {
            {"model", request.model},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens},
        };
        return extract_content(client_.post(client_.config().route, body.dump()));
    }

    const ProviderConfig& config() const noexcept { return client_.config(); }

    static std::string extract_content(const std::string& body) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("malformed completion response: ") + e.what());
        }
        const nlohmann::json* choice = nullptr;
        if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
            choice = &doc["choices"][0];
        }
        if (choice && choice->contains("message") && choice->at("message").contains("content") &&
            choice->at("message").at("content").is_string()) {
            std::string text = choice->at("message").at("content").get<std::string>();
            if (text.empty()) throw ProviderError("empty completion response");
            return text;
        }
        throw ProviderError("completion response has no choices[0].message.content");
    }

private:
    HttpJsonClient client_;
};

// Fills api_base/api_key from FACTLENS_API_BASE / FACTLENS_API_KEY when unset.
inline void apply_provider_env(ProviderConfig& config) {
    if (config.api_base.empty()) {
        if (const char* base = std::getenv("FACTLENS_API_BASE")) config.api_base = base;
    }
    if (config.api_key.empty()) {
        if (const char* key = std::getenv("FACTLENS_API_KEY")) config.api_key = key;
    }
}

} // namespace factlens

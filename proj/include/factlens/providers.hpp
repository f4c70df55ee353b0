#pragma once

// Chat-completion provider abstraction and the deterministic mock used for
// offline runs and tests.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "factlens/error.hpp"

namespace factlens {

struct ChatRequest {
    std::string model;
    std::string prompt;
    double temperature = 0.0;
    int max_tokens = 1024;
    // Ask caching layers to skip lookup (the fresh answer still gets stored).
    // Not part of the cache key.
    bool bypass_cache = false;
};

struct ProviderConfig {
    std::string api_base;
    std::string api_key;
    std::string route = "/v1/chat/completions";
    int timeout_seconds = 60;
    int max_retries = 3;
    int requests_per_minute = 0;  // 0 = uncapped
    int max_in_flight = 4;
    int backoff_initial_ms = 500;
    int backoff_max_ms = 30000;

    void validate() const {
        if (timeout_seconds <= 0) throw ConfigError("provider timeout_seconds must be > 0");
        if (max_retries < 0) throw ConfigError("provider max_retries must be >= 0");
        if (requests_per_minute < 0) throw ConfigError("provider requests_per_minute must be >= 0");
        if (max_in_flight < 1) throw ConfigError("provider max_in_flight must be >= 1");
    }
};

inline void validate_request(const ChatRequest& request) {
    if (request.prompt.empty()) throw PreconditionError("chat request prompt is empty");
    if (!(request.temperature >= 0.0)) throw PreconditionError("chat request temperature must be >= 0");
}

// Implementations must be safe to call from several threads at once.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;

    // Stable identifier; part of the response-cache key.
    virtual std::string id() const = 0;

    virtual std::string complete(const ChatRequest& request) = 0;
};

// Runs `parse` on the provider's answer; on ParseError asks once more with
// the identical prompt (bypassing caches) and lets a second failure escape.
template <typename Parse>
auto complete_and_parse(ChatProvider& provider, ChatRequest request, Parse&& parse)
    -> decltype(parse(std::string{})) {
    std::string first = provider.complete(request);
    try {
        return parse(first);
    } catch (const ParseError&) {
        request.bypass_cache = true;
        return parse(provider.complete(request));
    }
}

// Canned-response provider. Routes are checked in registration order.
//   Strict:    a route matches only when its key equals the whole prompt.
//   Substring: a route matches when every key is a substring of the prompt.
// A route with several responses serves them in sequence; the last repeats.
class MockProvider final : public ChatProvider {
public:
    enum class Mode { Strict, Substring };

    struct Route {
        std::vector<std::string> keys;
        std::vector<std::string> responses;
        std::optional<std::string> model;  // restricts the route to one model
    };

    explicit MockProvider(Mode mode = Mode::Substring) : mode_(mode) {}

    std::string id() const override { return "mock"; }

    Mode mode() const noexcept { return mode_; }

    MockProvider& add(std::string key, std::string response) {
        return add_route(Route{{std::move(key)}, {std::move(response)}, std::nullopt});
    }

    MockProvider& add_route(Route route) {
        if (route.responses.empty()) throw ConfigError("mock route has no response");
        std::lock_guard lock(mu_);
        routes_.push_back(std::move(route));
        hits_.push_back(0);
        return *this;
    }

    // Inserts ahead of every registered route.
    MockProvider& prepend_route(Route route) {
        if (route.responses.empty()) throw ConfigError("mock route has no response");
        std::lock_guard lock(mu_);
        routes_.insert(routes_.begin(), std::move(route));
        hits_.insert(hits_.begin(), 0);
        return *this;
    }

    std::string complete(const ChatRequest& request) override {
        validate_request(request);
        std::lock_guard lock(mu_);
        ++calls_;
        ++calls_by_model_[request.model];
        for (std::size_t i = 0; i < routes_.size(); ++i) {
            if (!matches(routes_[i], request)) continue;
            const auto& responses = routes_[i].responses;
            std::size_t k = std::min<std::size_t>(hits_[i], responses.size() - 1);
            ++hits_[i];
            return responses[k];
        }
        throw ProviderError("no canned response for prompt: " + preview(request.prompt));
    }

    std::size_t call_count() const {
        std::lock_guard lock(mu_);
        return calls_;
    }

    std::size_t call_count(const std::string& model) const {
        std::lock_guard lock(mu_);
        auto it = calls_by_model_.find(model);
        return it == calls_by_model_.end() ? 0 : it->second;
    }

    void reset_counters() {
        std::lock_guard lock(mu_);
        calls_ = 0;
        calls_by_model_.clear();
        std::fill(hits_.begin(), hits_.end(), 0);
    }

    std::size_t route_count() const {
        std::lock_guard lock(mu_);
        return routes_.size();
    }

private:
    bool matches(const Route& r, const ChatRequest& request) const {
        if (r.model && *r.model != request.model) return false;
        if (mode_ == Mode::Strict) return r.keys.size() == 1 && r.keys.front() == request.prompt;
        for (const auto& k : r.keys) {
            if (request.prompt.find(k) == std::string::npos) return false;
        }
        return true;
    }

    static std::string preview(const std::string& prompt) {
        constexpr std::size_t kMax = 160;
        std::string tail = prompt.size() > kMax ? "..." + prompt.substr(prompt.size() - kMax) : prompt;
        return tail;
    }

    Mode mode_;
    mutable std::mutex mu_;
    std::vector<Route> routes_;
    std::vector<std::size_t> hits_;
    std::size_t calls_ = 0;
    std::map<std::string, std::size_t> calls_by_model_;
};

namespace detail {

inline std::vector<std::string> string_or_list(const nlohmann::json& j, const char* field) {
    if (j.is_string()) return {j.get<std::string>()};
    if (j.is_array()) {
        std::vector<std::string> out;
        for (const auto& e : j) {
            if (!e.is_string()) throw ConfigError(std::string("mock fixture: '") + field + "' entries must be strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }
    throw ConfigError(std::string("mock fixture: '") + field + "' must be a string or list of strings");
}

inline void load_fixture_routes(const std::filesystem::path& path, std::vector<MockProvider::Route>& out,
                                std::optional<MockProvider::Mode>& mode, std::set<std::filesystem::path>& seen) {
    namespace fs = std::filesystem;
    fs::path canon = fs::weakly_canonical(path);
    if (!seen.insert(canon).second) throw ConfigError("mock fixture include cycle at " + path.string());
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read mock fixture: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("mock fixture " + path.string() + ": " + e.what());
    }
    try {
        if (doc.contains("mode") && !mode) {
            std::string m = doc.at("mode").get<std::string>();
            if (m == "strict") mode = MockProvider::Mode::Strict;
            else if (m == "substring") mode = MockProvider::Mode::Substring;
            else throw ConfigError("mock fixture: unknown mode '" + m + "'");
        }
        for (const auto& r : doc.value("routes", nlohmann::json::array())) {
            if (!r.contains("match") || !r.contains("response")) {
                throw ConfigError("mock fixture " + path.string() + ": route needs 'match' and 'response'");
            }
            MockProvider::Route route;
            route.keys = string_or_list(r.at("match"), "match");
            route.responses = string_or_list(r.at("response"), "response");
            if (route.responses.empty()) throw ConfigError("mock fixture: empty response list");
            if (r.contains("model")) route.model = r.at("model").get<std::string>();
            out.push_back(std::move(route));
        }
        for (const auto& inc : doc.value("include", nlohmann::json::array())) {
            load_fixture_routes(path.parent_path() / inc.get<std::string>(), out, mode, seen);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("mock fixture " + path.string() + ": " + e.what());
    }
    seen.erase(canon);  // only the current include chain counts as a cycle
}

} // namespace detail

// Fixture file (JSON):
//   {"mode": "substring",
//    "routes": [{"match": "..." | ["...", ...], "response": "..." | [...], "model": "..."}],
//    "include": ["other.json"]}
// Included routes are evaluated after the including file's own routes.
inline std::shared_ptr<MockProvider> load_mock_fixture(const std::filesystem::path& path) {
    std::vector<MockProvider::Route> routes;
    std::optional<MockProvider::Mode> mode;
    std::set<std::filesystem::path> seen;
    detail::load_fixture_routes(path, routes, mode, seen);
    auto mock = std::make_shared<MockProvider>(mode.value_or(MockProvider::Mode::Substring));
    for (auto& r : routes) mock->add_route(std::move(r));
    return mock;
}

} // namespace factlens

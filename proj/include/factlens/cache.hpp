#pragma once

// Persistent response cache: one raw-text file per key under
// <dir>/<first two hex digits of key>/<key>.txt, written via atomic rename.

#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <openssl/evp.h>

#include "factlens/error.hpp"
#include "factlens/providers.hpp"
#include "factlens/text.hpp"

namespace factlens {

using WarningSink = std::function<void(const std::string&)>;

inline WarningSink default_warning_sink() {
    return [](const std::string& msg) { std::clog << "warning: " << msg << '\n'; };
}

inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw CacheError("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0F]);
    }
    return out;
}

// Fields are length-prefixed so distinct tuples never serialize identically.
inline std::string cache_key(std::string_view provider_id, const ChatRequest& request) {
    std::string buf;
    auto put = [&buf](std::string_view field) {
        buf += std::to_string(field.size());
        buf.push_back(':');
        buf += field;
    };
    char temp[32];
    std::snprintf(temp, sizeof temp, "%.17g", request.temperature);
    put(provider_id);
    put(request.model);
    put(temp);
    put(request.prompt);
    return sha256_hex(buf);
}

class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir, WarningSink warn = default_warning_sink())
        : dir_(std::move(dir)), warn_(std::move(warn)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_)) {
            throw CacheError("cache directory not creatable: " + dir_.string());
        }
    }

    const std::filesystem::path& dir() const noexcept { return dir_; }

    std::filesystem::path path_for(const std::string& key) const {
        return dir_ / key.substr(0, 2) / (key + ".txt");
    }

    // Missing, unreadable, empty or non-UTF-8 entries are misses.
    std::optional<std::string> load(const std::string& key) const {
        auto path = path_for(key);
        std::error_code ec;
        if (!std::filesystem::exists(path, ec)) return std::nullopt;
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            warn_("unreadable cache entry " + path.string());
            return std::nullopt;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string value = ss.str();
        if (value.empty() || !text::is_valid_utf8(value)) {
            warn_("corrupt cache entry " + path.string());
            return std::nullopt;
        }
        return value;
    }

    void store(const std::string& key, const std::string& value) const {
        auto path = path_for(key);
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw CacheError("cannot create cache shard " + path.parent_path().string() + ": " + ec.message());
        auto tmp = path;
        tmp += ".tmp." + unique_suffix();
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw CacheError("cannot write cache entry " + tmp.string());
            out << value;
            if (!out.flush()) throw CacheError("cannot write cache entry " + tmp.string());
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec) {
            std::filesystem::remove(tmp, ec);
            throw CacheError("cannot publish cache entry " + path.string());
        }
    }

    // Hit: stored value, `compute` not invoked. Miss: compute, store, return.
    std::string cached(const std::string& key, const std::function<std::string()>& compute,
                       bool bypass_lookup = false) const {
        if (!bypass_lookup) {
            if (auto hit = load(key)) return *hit;
        }
        std::string value = compute();
        store(key, value);
        return value;
    }

private:
    static std::string unique_suffix() {
        static std::atomic<std::uint64_t> counter{0};
        std::ostringstream ss;
        ss << std::this_thread::get_id() << '.' << counter.fetch_add(1) << '.'
           << std::chrono::steady_clock::now().time_since_epoch().count();
        return ss.str();
    }

    std::filesystem::path dir_;
    WarningSink warn_;
};

// Memoizes another provider's answers on disk.
class CachingProvider final : public ChatProvider {
public:
    CachingProvider(std::shared_ptr<ChatProvider> inner, std::shared_ptr<const ResponseCache> cache)
        : inner_(std::move(inner)), cache_(std::move(cache)) {}

    std::string id() const override { return inner_->id(); }

    std::string complete(const ChatRequest& request) override {
        validate_request(request);
        return cache_->cached(cache_key(inner_->id(), request), [&] { return inner_->complete(request); },
                              request.bypass_cache);
    }

private:
    std::shared_ptr<ChatProvider> inner_;
    std::shared_ptr<const ResponseCache> cache_;
};

} // namespace factlens

#pragma once

// Text-similarity backends. The contract: symmetric, bounded in [0,1].

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "factlens/error.hpp"
#include "factlens/http_provider.hpp"
#include "factlens/text.hpp"

namespace factlens {

class SimilarityBackend {
public:
    virtual ~SimilarityBackend() = default;
    virtual std::string id() const = 0;
    virtual double similarity(std::string_view a, std::string_view b) const = 0;
};

inline void require_similarity_inputs(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty()) throw PreconditionError("similarity input is empty");
}

// Lowercased tokens with ASCII punctuation treated as separators.
inline std::vector<std::string> similarity_tokens(std::string_view s) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : s) {
        if (text::is_space(c) || text::is_punct(c)) {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Offline fallback: multiset token F1.
class TokenF1Similarity final : public SimilarityBackend {
public:
    std::string id() const override { return "token-f1"; }

    double similarity(std::string_view a, std::string_view b) const override {
        require_similarity_inputs(a, b);
        auto ta = similarity_tokens(a);
        auto tb = similarity_tokens(b);
        if (ta.empty() && tb.empty()) return 1.0;
        if (ta.empty() || tb.empty()) return 0.0;
        std::unordered_map<std::string, int> counts;
        for (const auto& t : ta) ++counts[t];
        std::size_t common = 0;
        for (const auto& t : tb) {
            auto it = counts.find(t);
            if (it != counts.end() && it->second > 0) {
                --it->second;
                ++common;
            }
        }
        if (common == 0) return 0.0;
        double precision = static_cast<double>(common) / static_cast<double>(tb.size());
        double recall = static_cast<double>(common) / static_cast<double>(ta.size());
        return 2.0 * precision * recall / (precision + recall);
    }
};

using Embedder = std::function<std::vector<double>(const std::string&)>;

// Cosine similarity of embeddings mapped to [0,1] via (1 + cos) / 2.
// Embeddings are memoized per text.
class EmbeddingSimilarity final : public SimilarityBackend {
public:
    EmbeddingSimilarity(std::string id, Embedder embed) : id_(std::move(id)), embed_(std::move(embed)) {}

    std::string id() const override { return id_; }

    double similarity(std::string_view a, std::string_view b) const override {
        require_similarity_inputs(a, b);
        if (a == b) return 1.0;
        const auto ea = embedding(std::string(a));
        const auto eb = embedding(std::string(b));
        if (ea.size() != eb.size() || ea.empty()) throw ProviderError("embedding dimensions differ or are empty");
        double dot = 0.0;
        double na = 0.0;
        double nb = 0.0;
        for (std::size_t i = 0; i < ea.size(); ++i) {
            dot += ea[i] * eb[i];
            na += ea[i] * ea[i];
            nb += eb[i] * eb[i];
        }
        if (na == 0.0 || nb == 0.0) throw ProviderError("zero-norm embedding");
        double cos = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
        return (1.0 + cos) / 2.0;
    }

private:
    std::vector<double> embedding(const std::string& s) const {
        {
            std::lock_guard lock(mu_);
            auto it = memo_.find(s);
            if (it != memo_.end()) return it->second;
        }
        auto e = embed_(s);
        std::lock_guard lock(mu_);
        return memo_.emplace(s, std::move(e)).first->second;
    }

    std::string id_;
    Embedder embed_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, std::vector<double>> memo_;
};

// Embedder over an OpenAI-style embeddings endpoint ({"model","input"} ->
// data[0].embedding).
inline Embedder make_http_embedder(ProviderConfig config, std::string model, std::string route = "/v1/embeddings") {
    auto client = std::make_shared<HttpJsonClient>(std::move(config));
    return [client, model = std::move(model), route = std::move(route)](const std::string& text) {
        nlohmann::json body = {{"model", model}, {"input", text}};
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(client->post(route, body.dump()));
            return doc.at("data").at(0).at("embedding").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("malformed embedding response: ") + e.what());
        }
    };
}

} // namespace factlens

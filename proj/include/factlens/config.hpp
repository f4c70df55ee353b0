#pragma once

// Run configuration. Config files are plain key=value lines with dotted
// keys; '#' starts a comment. Command-line flags override file values.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

#include "factlens/error.hpp"
#include "factlens/eval_ensemble.hpp"
#include "factlens/eval_statistical.hpp"
#include "factlens/providers.hpp"
#include "factlens/text.hpp"

namespace factlens {

enum class SimilarityKind { TokenF1, Embedding };

inline std::string_view to_string(SimilarityKind k) noexcept {
    return k == SimilarityKind::Embedding ? "embedding" : "token_f1";
}

struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path output;
    EvaluationMode mode = EvaluationMode::Ensemble;
    std::uint64_t seed = 17;
    std::size_t parallelism = 4;

    std::string decomposer_model = "gpt-4o";
    std::string judge_model = "gpt-4o-mini";
    std::string verifier_model = "gpt-4o-mini";
    std::string extractor_model = "gpt-4o-mini";

    std::optional<std::filesystem::path> prompts_dir;
    std::optional<std::filesystem::path> demonstrations;  // JSONL, four records
    std::optional<std::filesystem::path> cache_dir;
    std::optional<std::filesystem::path> mock_fixtures;

    bool use_gold_subclaims = false;
    bool holistic = false;

    StatisticalConfig statistical;
    ProviderConfig provider;
    SimilarityKind similarity = SimilarityKind::TokenF1;
    std::string similarity_model = "text-embedding-3-small";
    std::string similarity_route = "/v1/embeddings";

    double regression_l2 = 0.01;

    void validate() const {
        if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
        if (decomposer_model.empty() || judge_model.empty() || verifier_model.empty() || extractor_model.empty()) {
            throw ConfigError("model names must be non-empty");
        }
        if (!(regression_l2 >= 0.0)) throw ConfigError("analysis.l2 must be >= 0");
        statistical.validate();
        provider.validate();
        if (prompts_dir && !std::filesystem::is_directory(*prompts_dir)) {
            throw ConfigError("prompts directory not found: " + prompts_dir->string());
        }
        if (demonstrations && !std::filesystem::exists(*demonstrations)) {
            throw ConfigError("demonstrations file not found: " + demonstrations->string());
        }
        if (mock_fixtures && !std::filesystem::exists(*mock_fixtures)) {
            throw ConfigError("mock fixture file not found: " + mock_fixtures->string());
        }
    }
};

namespace detail {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

inline bool parse_bool(std::string_view key, std::string_view value) {
    const std::string v = text::to_lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

} // namespace detail

// Relative paths are resolved against `base_dir` (the config file's folder).
inline void apply_config_value(RunConfig& c, std::string_view key, std::string_view value,
                               const std::filesystem::path& base_dir = {}) {
    using detail::parse_bool;
    using detail::parse_number;
    auto path = [&] {
        std::filesystem::path p{std::string(value)};
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    const std::string v(value);

    if (key == "input") c.input = path();
    else if (key == "output") c.output = path();
    else if (key == "mode") {
        auto m = evaluation_mode_from_string(v);
        if (!m) throw ConfigError("unknown mode '" + v + "' (expected ensemble, statistical or llm)");
        c.mode = *m;
    }
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "parallelism") c.parallelism = parse_number<std::size_t>(key, value);
    else if (key == "decomposer.model") c.decomposer_model = v;
    else if (key == "judge.model") c.judge_model = v;
    else if (key == "verifier.model") c.verifier_model = v;
    else if (key == "extractor.model") c.extractor_model = v;
    else if (key == "prompts_dir") c.prompts_dir = path();
    else if (key == "demonstrations") c.demonstrations = path();
    else if (key == "cache_dir") c.cache_dir = path();
    else if (key == "mock_fixtures") c.mock_fixtures = path();
    else if (key == "use_gold_subclaims") c.use_gold_subclaims = parse_bool(key, value);
    else if (key == "holistic") c.holistic = parse_bool(key, value);
    else if (key == "statistical.similarity_threshold") c.statistical.similarity_threshold = parse_number<double>(key, value);
    else if (key == "statistical.fab_medium_max") c.statistical.fab_medium_max = parse_number<int>(key, value);
    else if (key == "statistical.red_medium_max") c.statistical.red_medium_max = parse_number<int>(key, value);
    else if (key == "provider.api_base") c.provider.api_base = v;
    else if (key == "provider.api_key") c.provider.api_key = v;
    else if (key == "provider.route") c.provider.route = v;
    else if (key == "provider.timeout_seconds") c.provider.timeout_seconds = parse_number<int>(key, value);
    else if (key == "provider.max_retries") c.provider.max_retries = parse_number<int>(key, value);
    else if (key == "provider.requests_per_minute") c.provider.requests_per_minute = parse_number<int>(key, value);
    else if (key == "provider.max_in_flight") c.provider.max_in_flight = parse_number<int>(key, value);
    else if (key == "provider.backoff_initial_ms") c.provider.backoff_initial_ms = parse_number<int>(key, value);
    else if (key == "provider.backoff_max_ms") c.provider.backoff_max_ms = parse_number<int>(key, value);
    else if (key == "similarity.backend") {
        if (v == "token_f1") c.similarity = SimilarityKind::TokenF1;
        else if (v == "embedding") c.similarity = SimilarityKind::Embedding;
        else throw ConfigError("unknown similarity.backend '" + v + "'");
    }
    else if (key == "similarity.model") c.similarity_model = v;
    else if (key == "similarity.route") c.similarity_route = v;
    else if (key == "analysis.l2") c.regression_l2 = parse_number<double>(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

inline void load_config_file(RunConfig& c, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    const auto base = path.parent_path();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = text::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        auto key = text::trim(sv.substr(0, eq));
        auto value = text::trim(sv.substr(eq + 1));
        try {
            apply_config_value(c, key, value, base);
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

} // namespace factlens

#pragma once

// Few-shot claim decomposition with seeded demonstration sampling.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "factlens/core.hpp"
#include "factlens/error.hpp"
#include "factlens/prompts.hpp"
#include "factlens/providers.hpp"
#include "factlens/text.hpp"

namespace factlens {

struct Demonstration {
    std::string claim;
    std::vector<std::string> sub_claims;
};

inline constexpr std::size_t kDemonstrationCount = 4;
inline constexpr std::size_t kDemonstrationsPerPrompt = 3;
inline constexpr std::uint64_t kDefaultSeed = 17;

class DemonstrationSet {
public:
    explicit DemonstrationSet(std::vector<Demonstration> demos) : demos_(std::move(demos)) {
        if (demos_.size() != kDemonstrationCount) {
            throw ConfigError("demonstration set needs exactly 4 demonstrations, got " +
                              std::to_string(demos_.size()));
        }
        for (const auto& d : demos_) {
            if (d.claim.empty() || d.sub_claims.empty()) {
                throw ConfigError("demonstration needs a claim and at least one sub-claim");
            }
        }
    }

    const std::vector<Demonstration>& demos() const noexcept { return demos_; }
    const Demonstration& operator[](std::size_t i) const { return demos_.at(i); }

private:
    std::vector<Demonstration> demos_;
};

// Bundled hand-written demonstrations.
inline DemonstrationSet default_demonstrations() {
    return DemonstrationSet({
        {"Lionel Messi, who was born in Rosario, has won eight Ballon d'Or awards.",
         {"Lionel Messi was born in Rosario.", "Lionel Messi has won eight Ballon d'Or awards."}},
        {"The Danube flows through ten countries and empties into the Black Sea.",
         {"The Danube flows through ten countries.", "The Danube empties into the Black Sea."}},
        {"Canberra is the capital of Australia.", {"Canberra is the capital of Australia."}},
        {"The 2010 FIFA World Cup, hosted by South Africa, was won by Spain, who beat the Netherlands in the final.",
         {"The 2010 FIFA World Cup was hosted by South Africa.", "The 2010 FIFA World Cup was won by Spain.",
          "Spain beat the Netherlands in the final of the 2010 FIFA World Cup."}},
    });
}

// One JSON object per line: {"claim": "...", "sub_claims": ["...", ...]}.
inline DemonstrationSet load_demonstrations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read demonstrations file: " + path.string());
    std::vector<Demonstration> demos;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            demos.push_back({j.at("claim").get<std::string>(), j.at("sub_claims").get<std::vector<std::string>>()});
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return DemonstrationSet(std::move(demos));
}

// Picks 3 of the 4 demonstrations and their order. Fisher-Yates over raw
// mt19937_64 output (its sequence is fixed by the standard, unlike the
// library distributions), so the choice is identical on every platform.
inline std::array<std::size_t, kDemonstrationsPerPrompt> sample_demonstrations(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::array<std::size_t, kDemonstrationCount> idx{0, 1, 2, 3};
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(idx[i], idx[j]);
    }
    return {idx[0], idx[1], idx[2]};
}

inline std::string render_demonstration(const Demonstration& d) {
    return "Claim: " + d.claim + "\nSub_Claims: " + text::render_list(d.sub_claims);
}

inline std::string build_decomposition_prompt(std::string_view claim, const DemonstrationSet& demos,
                                              std::uint64_t seed,
                                              std::string_view tpl = default_prompts::kDecomposition) {
    std::string block;
    for (std::size_t i : sample_demonstrations(seed)) {
        if (!block.empty()) block += "\n\n";
        block += render_demonstration(demos[i]);
    }
    return text::fill_template(tpl, {{"demonstrations", block}, {"claim", std::string(claim)}});
}

namespace detail {

// Reads a quoted item starting at s[i] (a quote char). A closing quote only
// counts when followed by ',' or ']' so unescaped apostrophes survive.
inline std::optional<std::string> read_quoted(std::string_view s, std::size_t& i) {
    const char q = s[i];
    std::string out;
    for (std::size_t k = i + 1; k < s.size(); ++k) {
        char c = s[k];
        if (c == '\\' && k + 1 < s.size()) {
            char n = s[++k];
            out.push_back(n == 'n' ? '\n' : n == 't' ? '\t' : n);
            continue;
        }
        if (c == q) {
            std::size_t after = k + 1;
            while (after < s.size() && text::is_space(s[after])) ++after;
            if (after >= s.size() || s[after] == ',' || s[after] == ']') {
                i = after;
                return out;
            }
        }
        out.push_back(c);
    }
    return std::nullopt;
}

inline std::string strip_item(std::string_view item) {
    item = text::trim(item);
    while (item.size() >= 2 && ((item.front() == '"' && item.back() == '"') ||
                                (item.front() == '\'' && item.back() == '\''))) {
        item = text::trim(item.substr(1, item.size() - 2));
    }
    return std::string(item);
}

struct BracketedList {
    std::vector<std::string> items;
    bool quoted = false;
};

inline std::optional<BracketedList> parse_bracketed(std::string_view raw) {
    auto open = raw.find('[');
    if (open == std::string_view::npos) return std::nullopt;
    auto close = raw.rfind(']');
    if (close == std::string_view::npos || close < open) return std::nullopt;
    std::string_view body = raw.substr(open + 1, close - open - 1);
    std::vector<std::string> items;
    std::size_t i = 0;
    bool quoted_any = false;
    while (i < body.size()) {
        while (i < body.size() && (text::is_space(body[i]) || body[i] == ',')) ++i;
        if (i >= body.size()) break;
        if (body[i] == '"' || body[i] == '\'') {
            auto item = read_quoted(body, i);
            if (!item) return std::nullopt;
            quoted_any = true;
            auto s = std::string(text::trim(*item));
            if (!s.empty()) items.push_back(std::move(s));
        } else {
            if (quoted_any) return std::nullopt;
            auto comma = body.find(',', i);
            if (comma == std::string_view::npos) comma = body.size();
            auto s = strip_item(body.substr(i, comma - i));
            if (!s.empty()) items.push_back(std::move(s));
            i = comma;
        }
    }
    return BracketedList{std::move(items), quoted_any};
}

inline bool has_bullet(std::string_view line, std::string_view& body) {
    line = text::trim(line);
    if (line.empty()) return false;
    if (line.front() == '-' || line.front() == '*' || line.front() == '+' || line.front() == '\xE2') {
        if (line.front() == '\xE2') {  // U+2022 bullet
            if (line.substr(0, 3) != "\xE2\x80\xA2") return false;
            body = text::trim(line.substr(3));
        } else {
            body = text::trim(line.substr(1));
        }
        return true;
    }
    std::size_t i = 0;
    while (i < line.size() && text::is_digit(line[i])) ++i;
    if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
        body = text::trim(line.substr(i + 1));
        return true;
    }
    return false;
}

} // namespace detail

// Accepts a bracketed (quoted) list, bulleted / numbered lines, or two or
// more plain lines. A lone unmarked line is prose, not a list.
inline std::vector<std::string> parse_subclaim_list(std::string_view raw) {
    auto bracketed = detail::parse_bracketed(raw);
    if (bracketed && bracketed->quoted && !bracketed->items.empty()) return std::move(bracketed->items);

    std::vector<std::string> bulleted;
    std::vector<std::string> plain;
    for (auto line : text::split_lines(raw)) {
        std::string_view body;
        if (detail::has_bullet(line, body)) {
            auto s = detail::strip_item(body);
            if (!s.empty()) bulleted.push_back(std::move(s));
        } else {
            auto s = detail::strip_item(line);
            if (!s.empty()) plain.push_back(std::move(s));
        }
    }
    std::vector<std::string> items;
    if (!bulleted.empty()) items = std::move(bulleted);
    else if (bracketed && !bracketed->items.empty()) items = std::move(bracketed->items);
    else if (plain.size() >= 2) items = std::move(plain);
    if (items.empty()) throw ParseError("no sub-claim list found in decomposition output");
    return items;
}

class Decomposer {
public:
    Decomposer(std::shared_ptr<ChatProvider> provider, std::string model,
               DemonstrationSet demos = default_demonstrations(),
               std::string prompt_template = std::string(default_prompts::kDecomposition))
        : provider_(std::move(provider)), model_(std::move(model)), demos_(std::move(demos)),
          template_(std::move(prompt_template)) {}

    std::string build_prompt(std::string_view claim, std::uint64_t seed) const {
        return build_decomposition_prompt(claim, demos_, seed, template_);
    }

    // Temperature is fixed at 0.
    Decomposition decompose(const ClaimRecord& claim, std::uint64_t seed) const {
        if (text::trim(claim.claim).empty()) throw PreconditionError("claim text is empty");
        ChatRequest req{model_, build_prompt(claim.claim, seed), 0.0};
        try {
            auto subs = complete_and_parse(*provider_, req, parse_subclaim_list);
            return Decomposition{claim.id, std::move(subs), model_, seed};
        } catch (const ParseError& e) {
            throw DecompositionError("claim " + claim.id + ": " + e.what());
        }
    }

    const std::string& model() const noexcept { return model_; }
    const DemonstrationSet& demonstrations() const noexcept { return demos_; }

private:
    std::shared_ptr<ChatProvider> provider_;
    std::string model_;
    DemonstrationSet demos_;
    std::string template_;
};

} // namespace factlens

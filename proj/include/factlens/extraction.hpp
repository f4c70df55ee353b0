#pragma once

// (subject, object) extraction through the chat provider, plus the entity
// canonicalization used for all set comparisons.

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factlens/core.hpp"
#include "factlens/error.hpp"
#include "factlens/prompts.hpp"
#include "factlens/providers.hpp"
#include "factlens/text.hpp"

namespace factlens {

// Lowercase, trim, collapse whitespace, then strip surrounding punctuation
// and leading articles until nothing changes. Idempotent.
inline std::string normalize_entity(std::string_view raw) {
    std::string s = text::collapse_whitespace(text::to_lower(raw));
    for (;;) {
        const std::string before = s;
        std::size_t b = 0;
        std::size_t e = s.size();
        while (b < e && (text::is_punct(s[b]) || text::is_space(s[b]))) ++b;
        while (e > b && (text::is_punct(s[e - 1]) || text::is_space(s[e - 1]))) --e;
        s = s.substr(b, e - b);
        for (std::string_view article : {"the ", "a ", "an "}) {
            if (s.size() > article.size() && s.compare(0, article.size(), article) == 0) {
                s.erase(0, article.size());
                break;
            }
        }
        if (s == before) return s;
    }
}

struct EntityPair {
    std::string subject;
    std::string object;
};

namespace detail {

inline std::string_view strip_list_marker(std::string_view line) {
    line = text::trim(line);
    if (!line.empty() && (line.front() == '-' || line.front() == '*' || line.front() == '+')) {
        line = text::trim(line.substr(1));
    }
    std::size_t i = 0;
    while (i < line.size() && text::is_digit(line[i])) ++i;
    if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) line = text::trim(line.substr(i + 1));
    if (line.size() >= 2 && line.front() == '(' && line.back() == ')') line = text::trim(line.substr(1, line.size() - 2));
    return line;
}

inline void push_unique(std::vector<std::string>& list, std::string value) {
    if (value.empty()) return;
    for (const auto& v : list) {
        if (v == value) return;
    }
    list.push_back(std::move(value));
}

} // namespace detail

// One "subject | object" per line; list bullets, numbering and enclosing
// parentheses are tolerated. "NONE" (alone) means no pairs.
inline std::vector<EntityPair> parse_pair_lines(std::string_view raw) {
    std::vector<EntityPair> pairs;
    bool saw_none = false;
    for (auto line : text::split_lines(raw)) {
        auto body = detail::strip_list_marker(line);
        if (body.empty()) continue;
        auto bar = body.find('|');
        if (bar == std::string_view::npos) {
            if (text::to_lower(body) == "none") saw_none = true;
            continue;
        }
        pairs.push_back({std::string(text::trim(body.substr(0, bar))), std::string(text::trim(body.substr(bar + 1)))});
    }
    if (pairs.empty() && !saw_none) throw ParseError("no 'subject | object' pairs in extraction response");
    return pairs;
}

inline EntityAnnotation annotation_from_pairs(const std::vector<EntityPair>& pairs) {
    EntityAnnotation ann;
    for (const auto& p : pairs) {
        detail::push_unique(ann.subjects, normalize_entity(p.subject));
        detail::push_unique(ann.objects, normalize_entity(p.object));
    }
    return ann;
}

class EntityExtractor {
public:
    EntityExtractor(std::shared_ptr<ChatProvider> provider, std::string model,
                    std::string prompt_template = std::string(default_prompts::kExtraction))
        : provider_(std::move(provider)), model_(std::move(model)), template_(std::move(prompt_template)) {}

    std::string build_prompt(std::string_view text) const {
        return text::fill_template(template_, {{"text", std::string(text)}});
    }

    EntityAnnotation extract_pairs(std::string_view text) const {
        if (text::trim(text).empty()) throw PreconditionError("extraction text is empty");
        ChatRequest req{model_, build_prompt(text), 0.0};
        std::string last_raw;
        try {
            return complete_and_parse(*provider_, req, [&](const std::string& raw) {
                last_raw = raw;
                return annotation_from_pairs(parse_pair_lines(raw));
            });
        } catch (const ParseError& e) {
            throw ExtractionError(std::string("extraction failed for \"") + std::string(text) + "\": " + e.what(),
                                  last_raw);
        }
    }

    ClaimEntities entities_of_claim(std::string_view claim) const {
        auto ann = extract_pairs(claim);
        return ClaimEntities{std::move(ann.subjects), std::move(ann.objects)};
    }

    const std::string& model() const noexcept { return model_; }

private:
    std::shared_ptr<ChatProvider> provider_;
    std::string model_;
    std::string template_;
};

} // namespace factlens

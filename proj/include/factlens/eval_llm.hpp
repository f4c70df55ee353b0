#pragma once

// LLM-as-judge scoring of all six metrics.

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "factlens/core.hpp"
#include "factlens/error.hpp"
#include "factlens/prompts.hpp"
#include "factlens/providers.hpp"
#include "factlens/text.hpp"

namespace factlens {

// A single sub-claim (per-sub-claim metrics) or the whole set (coverage,
// redundancy).
using JudgeTarget = std::variant<std::string, std::vector<std::string>>;

inline std::string build_metric_prompt(MetricKind metric, std::string_view claim, const JudgeTarget& target,
                                       const PromptSet& prompts = {}) {
    const bool whole_set = std::holds_alternative<std::vector<std::string>>(target);
    if (whole_set != is_claim_level(metric)) {
        throw PreconditionError(std::string(to_string(metric)) +
                                (whole_set ? " is scored per sub-claim, got the whole set"
                                           : " is scored on the whole sub-claim set, got one sub-claim"));
    }
    std::string slot = whole_set ? text::render_list(std::get<std::vector<std::string>>(target))
                                 : std::get<std::string>(target);
    return text::fill_template(prompts.evaluation, {{"metric", prompts.instruction(metric)},
                                                    {"claim", std::string(claim)},
                                                    {"sub_claim", std::move(slot)}});
}

// Returns the numeric level (1..3). Atomicity answers are matched longest
// label first; other metrics take the earliest of low/medium/high.
inline int parse_ordinal(std::string_view answer, MetricKind metric) {
    const std::string lower = text::to_lower(answer);
    if (metric == MetricKind::Atomicity) {
        if (lower.find("non-atomic-2") != std::string::npos) return ordinal_to_numeric(AtomicityLabel::NonAtomic2);
        if (lower.find("non-atomic-1") != std::string::npos) return ordinal_to_numeric(AtomicityLabel::NonAtomic1);
        if (lower.find("atomic") != std::string::npos) return ordinal_to_numeric(AtomicityLabel::Atomic);
        throw ParseError("no atomicity label in judge answer");
    }
    std::size_t best = std::string::npos;
    OrdinalScore level = OrdinalScore::Low;
    for (OrdinalScore s : {OrdinalScore::Low, OrdinalScore::Medium, OrdinalScore::High}) {
        auto pos = lower.find(to_string(s));
        if (pos < best) {
            best = pos;
            level = s;
        }
    }
    if (best == std::string::npos) throw ParseError("no low/medium/high label in judge answer");
    return ordinal_to_numeric(level);
}

class LlmJudge {
public:
    LlmJudge(std::shared_ptr<ChatProvider> provider, std::string model, PromptSet prompts = {})
        : provider_(std::move(provider)), model_(std::move(model)), prompts_(std::move(prompts)) {}

    // One call per sub-claim for per-sub-claim metrics, one call otherwise.
    MetricScores evaluate_metric(MetricKind metric, const ClaimRecord& claim, const Decomposition& d) const {
        MetricScores out;
        out.source = ScoreSource::Llm;
        if (is_claim_level(metric)) {
            out.claim_level = judge(metric, claim, d.sub_claims, "whole set");
        } else {
            out.per_subclaim.reserve(d.size());
            for (std::size_t i = 0; i < d.size(); ++i) {
                out.per_subclaim.push_back(judge(metric, claim, d.sub_claims[i], "sub-claim " + std::to_string(i)));
            }
        }
        return out;
    }

    const std::string& model() const noexcept { return model_; }

private:
    int judge(MetricKind metric, const ClaimRecord& claim, JudgeTarget target, const std::string& where) const {
        ChatRequest req{model_, build_metric_prompt(metric, claim.claim, target, prompts_), 0.0};
        try {
            return complete_and_parse(*provider_, req, [metric](const std::string& raw) {
                return parse_ordinal(raw, metric);
            });
        } catch (const Error& e) {
            throw EvaluationError(std::string(to_string(metric)),
                                  "claim " + claim.id + ", " + where + ": " + e.what());
        }
    }

    std::shared_ptr<ChatProvider> provider_;
    std::string model_;
    PromptSet prompts_;
};

} // namespace factlens

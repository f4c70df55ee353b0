#pragma once

// Evidence-based true/false verification of sub-claims and whole claims.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factlens/core.hpp"
#include "factlens/error.hpp"
#include "factlens/prompts.hpp"
#include "factlens/providers.hpp"
#include "factlens/text.hpp"

namespace factlens {

// Earliest case-insensitive occurrence of "true" or "false".
inline bool parse_verdict(std::string_view answer) {
    const std::string lower = text::to_lower(answer);
    const auto t = lower.find("true");
    const auto f = lower.find("false");
    if (t == std::string::npos && f == std::string::npos) throw ParseError("no true/false verdict in answer");
    return t < f;
}

// A claim holds only if every sub-claim holds.
inline bool aggregate_labels(std::span<const bool> labels) {
    if (labels.empty()) throw PreconditionError("no labels to aggregate");
    for (bool l : labels) {
        if (!l) return false;
    }
    return true;
}

inline bool aggregate_labels(const std::vector<bool>& labels) {
    if (labels.empty()) throw PreconditionError("no labels to aggregate");
    for (bool l : labels) {
        if (!l) return false;
    }
    return true;
}

class Verifier {
public:
    Verifier(std::shared_ptr<ChatProvider> provider, std::string model,
             std::string prompt_template = std::string(default_prompts::kVerification))
        : provider_(std::move(provider)), model_(std::move(model)), template_(std::move(prompt_template)) {}

    std::string build_prompt(std::string_view claim, std::string_view evidence) const {
        return text::fill_template(template_, {{"evidence", std::string(evidence)}, {"claim", std::string(claim)}});
    }

    bool verify_subclaim(std::string_view sub_claim, std::string_view evidence) const {
        if (text::trim(evidence).empty()) throw PreconditionError("evidence is empty");
        if (text::trim(sub_claim).empty()) throw PreconditionError("claim to verify is empty");
        ChatRequest req{model_, build_prompt(sub_claim, evidence), 0.0};
        try {
            return complete_and_parse(*provider_, req, parse_verdict);
        } catch (const ParseError& e) {
            throw VerificationError("\"" + std::string(sub_claim) + "\": " + e.what());
        }
    }

    VerificationOutcome verify_fine_grained(const ClaimRecord& claim, const Decomposition& d) const {
        if (d.sub_claims.empty()) throw PreconditionError("decomposition of claim " + claim.id + " is empty");
        VerificationOutcome out;
        out.claim_id = claim.id;
        out.subclaim_labels.reserve(d.size());
        for (const auto& sc : d.sub_claims) out.subclaim_labels.push_back(verify_subclaim(sc, claim.evidence));
        out.aggregated_label = aggregate_labels(out.subclaim_labels);
        return out;
    }

    bool verify_holistic(const ClaimRecord& claim) const { return verify_subclaim(claim.claim, claim.evidence); }

    const std::string& model() const noexcept { return model_; }

private:
    std::shared_ptr<ChatProvider> provider_;
    std::string model_;
    std::string template_;
};

} // namespace factlens

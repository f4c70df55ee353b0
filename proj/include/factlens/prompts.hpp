#pragma once

// Prompt templates. Each has a built-in default and may be overridden by a
// file of the same name in a prompts directory:
//
//   decomposition.txt   {demonstrations} {claim}
//   evaluation.txt      {metric} {claim} {sub_claim}
//   metrics/<name>.txt  instruction paragraph substituted for {metric}
//   extraction.txt      {text}
//   verification.txt    {evidence} {claim}

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "factlens/core.hpp"
#include "factlens/error.hpp"

namespace factlens {

namespace default_prompts {

inline constexpr std::string_view kDecomposition =
    "We aim to fact-check a textual claim. To make the fact-checking task simpler, we break down a claim "
    "into simpler, atomic sub-claims to fact-check as needed. Note that atomic sub-claims refer to unit "
    "claims within the original claim, that refer to a single concept that can be independently verified "
    "without having to refer to the original claim. Verification of the sub-claims should not require "
    "aggregation of facts or multi-hop reasoning over concepts. However, the sub-claim should have all the "
    "contextual information preserved from the original claim.\n"
    "\n"
    "Your task is to break down a claim into atomic sub-claims for fact checking only if needed. If the "
    "original claim itself is a unit claim, do not break it down.\n"
    "\n"
    "For example:\n"
    "{demonstrations}\n"
    "\n"
    "Note how each sub claim contains atomic information to fact check and is brief, yet is contextualized "
    "with all the information needed from the original claim.\n"
    "\n"
    "Now find the sub claims from the following claim.\n"
    "Claim: {claim}\n"
    "Sub_Claims: < your output in form of a list >\n";

inline constexpr std::string_view kEvaluation =
    "A factual claim can be broken down into atomic, yet contextualized sub-claims which makes it easier to "
    "fact check. You will be provided a claim, and one of the sub-claims which have been extracted from it. "
    "Your job is to evaluate this sub-claim on the following metric:\n"
    "\n"
    "{metric}\n"
    "\n"
    "Your answer should either be \"low\", \"medium\" or \"high\" based on the metric provided. Please be "
    "objective and fair in your evaluation.\n"
    "\n"
    "Claim: {claim}\n"
    "Sub-Claim: {sub_claim}\n";

inline constexpr std::string_view kAtomicity =
    "\"atomicity\": If the sub-claim is atomic i.e. it is simple and centers around only one subject and one "
    "object, and the verification does not require aggregation of facts or multihop reasoning over concepts. "
    "Label the sub-claim as either \"atomic\" which denotes one subject and one object, or \"non-atomic-1\" "
    "which denotes one subject, multiple objects, or \"non-atomic-2\" which denotes multiple subjects";

inline constexpr std::string_view kSufficiency =
    "\"sufficiency\": If the sub-claim itself is sufficient to be fact-checked without the need of any "
    "additional contextual information i.e. the sub-claim contains all the required contextual information "
    "to be fact-checked independently and is not ambiguous. Your answer should indicate whether the "
    "sub-claim has \"low\", \"medium\" or \"high\" sufficiency.";

inline constexpr std::string_view kRedundancy =
    "\"redundancy\": If the sub-claims contain redundant or repeated information among them, i.e. multiple "
    "semantically equivalent sub-claims. Your answer should indicate whether the sub-claims have \"low\", "
    "\"medium\" or \"high\" redundancy.";

inline constexpr std::string_view kCoverage =
    "\"coverage\": If the set of sub-claims cover all the facts and information made in the original claim. "
    "Your answer should indicate whether the sub-claims have \"low\", \"medium\" or \"high\" coverage.";

inline constexpr std::string_view kFabrication =
    "\"fabrication\": If the sub-claim shows a degree of fabrication with respect to the original claim i.e. "
    "how much new information is added which was not present in the original claim. Note this is not to be "
    "judged according to the factuality of the original claims or sub-claims. Your answer should indicate "
    "whether the sub-claim has \"low\", \"medium\" or \"high\" fabrication.";

inline constexpr std::string_view kReadability =
    "\"readability\": If the sub-claim is readable to an end user. Your answer should indicate whether the "
    "sub-claim has \"low\", \"medium\" or \"high\" readability.";

inline constexpr std::string_view kExtraction =
    "Extract all (Subject, Object) pairs from the text below. A subject is an entity the text makes an "
    "assertion about; an object is the entity, value or attribute asserted of that subject. Write one pair "
    "per line in the form \"subject | object\" and nothing else. If the text contains no such pair, write "
    "NONE.\n"
    "\n"
    "Text: {text}\n"
    "Pairs:\n";

inline constexpr std::string_view kVerification =
    "Judge whether the claim below is true or false based only on the evidence provided. Answer with a "
    "single word, \"true\" or \"false\", before any explanation.\n"
    "\n"
    "Evidence: {evidence}\n"
    "\n"
    "Claim: {claim}\n"
    "Verdict:\n";

inline std::string_view metric_instruction(MetricKind m) noexcept {
    switch (m) {
    case MetricKind::Atomicity: return kAtomicity;
    case MetricKind::Sufficiency: return kSufficiency;
    case MetricKind::Fabrication: return kFabrication;
    case MetricKind::Coverage: return kCoverage;
    case MetricKind::Redundancy: return kRedundancy;
    case MetricKind::Readability: return kReadability;
    }
    return kAtomicity;
}

} // namespace default_prompts

struct PromptSet {
    std::string decomposition{default_prompts::kDecomposition};
    std::string evaluation{default_prompts::kEvaluation};
    std::string extraction{default_prompts::kExtraction};
    std::string verification{default_prompts::kVerification};
    std::map<MetricKind, std::string> metric_instructions = [] {
        std::map<MetricKind, std::string> out;
        for (MetricKind m : kAllMetrics) out.emplace(m, std::string(default_prompts::metric_instruction(m)));
        return out;
    }();

    const std::string& instruction(MetricKind m) const { return metric_instructions.at(m); }
};

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read prompt file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Editors append a final newline to one-paragraph files; instructions are
// substituted inline, so drop it.
inline std::string strip_final_newline(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

} // namespace detail

// Loads overrides from `dir`; files that do not exist keep their default.
inline PromptSet load_prompt_set(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("prompts directory not found: " + dir.string());
    PromptSet set;
    auto load = [&](const fs::path& rel, std::string& slot) {
        fs::path p = dir / rel;
        if (fs::exists(p)) slot = detail::read_text_file(p);
    };
    load("decomposition.txt", set.decomposition);
    load("evaluation.txt", set.evaluation);
    load("extraction.txt", set.extraction);
    load("verification.txt", set.verification);
    for (MetricKind m : kAllMetrics) {
        fs::path p = dir / "metrics" / (std::string(to_string(m)) + ".txt");
        if (fs::exists(p)) set.metric_instructions[m] = detail::strip_final_newline(detail::read_text_file(p));
    }
    return set;
}

} // namespace factlens

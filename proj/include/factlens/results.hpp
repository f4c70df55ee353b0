#pragma once

// Per-instance outcome of a run, shared by the pipeline, the analyses and
// the report writer.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factlens/core.hpp"

namespace factlens {

struct InstanceResult {
    ClaimRecord record;
    Decomposition decomposition;
    std::optional<EvaluationReport> evaluation;
    std::optional<VerificationOutcome> verification;
    std::map<MetricKind, std::vector<int>> human_scores;
};

struct InstanceFailure {
    std::string claim_id;
    std::string stage;  // decompose | evaluate | verify
    std::string message;
};

struct RunResults {
    std::vector<InstanceResult> instances;  // sorted by claim id
    std::vector<InstanceFailure> failures;  // sorted by claim id
    std::map<std::string, std::size_t> provider_calls;  // by role
};

} // namespace factlens

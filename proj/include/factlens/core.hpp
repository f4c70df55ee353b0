#pragma once

// Domain types shared across the toolkit: claims, decompositions, the
// three-level ordinal scales and the report/outcome records.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factlens/error.hpp"

namespace factlens {

struct ClaimRecord {
    std::string id;
    std::string claim;
    std::string evidence;
    bool gold_label = false;  // true = supported
    std::string source;
};

struct Decomposition {
    std::string claim_id;
    std::vector<std::string> sub_claims;
    std::string generator;  // model identifier or "ground-truth"
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return sub_claims.size(); }
};

inline constexpr std::string_view kGroundTruthGenerator = "ground-truth";

// Ordered Low < Medium < High; the underlying values are the numeric mapping.
enum class OrdinalScore : int { Low = 1, Medium = 2, High = 3 };

// Ordered NonAtomic2 < NonAtomic1 < Atomic.
enum class AtomicityLabel : int { NonAtomic2 = 1, NonAtomic1 = 2, Atomic = 3 };

enum class MetricKind { Atomicity, Sufficiency, Fabrication, Coverage, Redundancy, Readability };

inline constexpr std::array<MetricKind, 6> kAllMetrics = {
    MetricKind::Atomicity,  MetricKind::Sufficiency, MetricKind::Fabrication,
    MetricKind::Coverage,   MetricKind::Redundancy,  MetricKind::Readability,
};

// Coverage and redundancy judge the sub-claim set as a whole.
constexpr bool is_claim_level(MetricKind m) noexcept {
    return m == MetricKind::Coverage || m == MetricKind::Redundancy;
}

enum class ScoreSource { Statistical, Llm };

inline std::string_view to_string(OrdinalScore s) noexcept {
    switch (s) {
    case OrdinalScore::Low: return "low";
    case OrdinalScore::Medium: return "medium";
    case OrdinalScore::High: return "high";
    }
    return "low";
}

inline std::string_view to_string(AtomicityLabel a) noexcept {
    switch (a) {
    case AtomicityLabel::NonAtomic2: return "non-atomic-2";
    case AtomicityLabel::NonAtomic1: return "non-atomic-1";
    case AtomicityLabel::Atomic: return "atomic";
    }
    return "atomic";
}

inline std::string_view to_string(MetricKind m) noexcept {
    switch (m) {
    case MetricKind::Atomicity: return "atomicity";
    case MetricKind::Sufficiency: return "sufficiency";
    case MetricKind::Fabrication: return "fabrication";
    case MetricKind::Coverage: return "coverage";
    case MetricKind::Redundancy: return "redundancy";
    case MetricKind::Readability: return "readability";
    }
    return "atomicity";
}

inline std::string_view to_string(ScoreSource s) noexcept {
    return s == ScoreSource::Statistical ? "statistical" : "llm";
}

inline std::optional<MetricKind> metric_from_string(std::string_view name) noexcept {
    for (MetricKind m : kAllMetrics) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

inline std::optional<OrdinalScore> ordinal_from_string(std::string_view s) noexcept {
    if (s == "low") return OrdinalScore::Low;
    if (s == "medium") return OrdinalScore::Medium;
    if (s == "high") return OrdinalScore::High;
    return std::nullopt;
}

inline std::optional<AtomicityLabel> atomicity_from_string(std::string_view s) noexcept {
    if (s == "atomic") return AtomicityLabel::Atomic;
    if (s == "non-atomic-1") return AtomicityLabel::NonAtomic1;
    if (s == "non-atomic-2") return AtomicityLabel::NonAtomic2;
    return std::nullopt;
}

constexpr int ordinal_to_numeric(OrdinalScore s) noexcept { return static_cast<int>(s); }
constexpr int ordinal_to_numeric(AtomicityLabel a) noexcept { return static_cast<int>(a); }

inline double aggregate_numeric(std::span<const int> scores) {
    if (scores.empty()) throw PreconditionError("empty score list");
    double sum = 0.0;
    for (int s : scores) sum += s;
    return sum / static_cast<double>(scores.size());
}

// [1,1.5) -> Low, [1.5,2.5) -> Medium, [2.5,3] -> High.
inline OrdinalScore numeric_to_level(double mean) {
    if (!(mean >= 1.0 && mean <= 3.0)) {
        throw PreconditionError("numeric score out of range [1,3]: " + std::to_string(mean));
    }
    if (mean < 1.5) return OrdinalScore::Low;
    if (mean < 2.5) return OrdinalScore::Medium;
    return OrdinalScore::High;
}

struct EntityAnnotation {
    std::vector<std::string> subjects;
    std::vector<std::string> objects;

    bool empty() const noexcept { return subjects.empty() && objects.empty(); }
    friend bool operator==(const EntityAnnotation&, const EntityAnnotation&) = default;
};

struct ClaimEntities {
    std::vector<std::string> subjects;
    std::vector<std::string> objects;

    friend bool operator==(const ClaimEntities&, const ClaimEntities&) = default;
};

// Scores for one metric: n per-sub-claim entries, or one claim-level entry.
// Atomicity entries hold AtomicityLabel numerics; all are in {1,2,3}.
struct MetricScores {
    ScoreSource source = ScoreSource::Llm;
    std::vector<int> per_subclaim;
    std::optional<int> claim_level;

    double mean() const {
        if (claim_level) return static_cast<double>(*claim_level);
        return aggregate_numeric(per_subclaim);
    }

    friend bool operator==(const MetricScores&, const MetricScores&) = default;
};

struct EvaluationDiagnostics {
    std::optional<int> fab;
    std::optional<int> red;
    std::optional<ClaimEntities> claim_entities;
    std::vector<EntityAnnotation> annotations;
    // Sub-claim indices whose annotation had no subject (or no object with a
    // single subject); they were labeled atomic by convention.
    std::vector<std::size_t> degenerate_annotations;

    friend bool operator==(const EvaluationDiagnostics&, const EvaluationDiagnostics&) = default;
};

struct EvaluationReport {
    std::string claim_id;
    std::size_t subclaim_count = 0;
    std::map<MetricKind, MetricScores> metrics;  // absent metrics were not scored
    EvaluationDiagnostics diagnostics;

    bool has(MetricKind m) const { return metrics.count(m) != 0; }

    const MetricScores& at(MetricKind m) const {
        auto it = metrics.find(m);
        if (it == metrics.end()) {
            throw PreconditionError("metric not scored: " + std::string(to_string(m)));
        }
        return it->second;
    }

    std::optional<double> mean(MetricKind m) const {
        auto it = metrics.find(m);
        if (it == metrics.end()) return std::nullopt;
        return it->second.mean();
    }

    // Level for binning: claim-level metrics use their direct level.
    std::optional<OrdinalScore> level(MetricKind m) const {
        auto it = metrics.find(m);
        if (it == metrics.end()) return std::nullopt;
        if (it->second.claim_level) return static_cast<OrdinalScore>(*it->second.claim_level);
        return numeric_to_level(it->second.mean());
    }
};

struct VerificationOutcome {
    std::string claim_id;
    std::vector<bool> subclaim_labels;
    bool aggregated_label = false;
    std::optional<bool> holistic_label;
    std::vector<std::string> rationales;

    std::size_t subclaim_count() const noexcept { return subclaim_labels.size(); }
};

} // namespace factlens

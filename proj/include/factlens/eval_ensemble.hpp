#pragma once

// Combines statistical and LLM scores into one EvaluationReport.
//
// Routing per mode:
//   ensemble     atomicity, coverage -> statistical; the other four -> LLM
//   statistical  atomicity, fabrication, coverage, redundancy; sufficiency
//                and readability are left absent
//   llm          all six from the judge (4n + 2 calls)

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factlens/core.hpp"
#include "factlens/error.hpp"
#include "factlens/eval_llm.hpp"
#include "factlens/eval_statistical.hpp"
#include "factlens/extraction.hpp"
#include "factlens/similarity.hpp"

namespace factlens {

enum class EvaluationMode { Ensemble, Statistical, Llm };

inline std::string_view to_string(EvaluationMode m) noexcept {
    switch (m) {
    case EvaluationMode::Ensemble: return "ensemble";
    case EvaluationMode::Statistical: return "statistical";
    case EvaluationMode::Llm: return "llm";
    }
    return "ensemble";
}

inline std::optional<EvaluationMode> evaluation_mode_from_string(std::string_view s) noexcept {
    if (s == "ensemble") return EvaluationMode::Ensemble;
    if (s == "statistical") return EvaluationMode::Statistical;
    if (s == "llm") return EvaluationMode::Llm;
    return std::nullopt;
}

inline std::optional<ScoreSource> routed_source(EvaluationMode mode, MetricKind m) noexcept {
    switch (mode) {
    case EvaluationMode::Llm: return ScoreSource::Llm;
    case EvaluationMode::Statistical:
        if (m == MetricKind::Sufficiency || m == MetricKind::Readability) return std::nullopt;
        return ScoreSource::Statistical;
    case EvaluationMode::Ensemble:
        if (m == MetricKind::Atomicity || m == MetricKind::Coverage) return ScoreSource::Statistical;
        return ScoreSource::Llm;
    }
    return std::nullopt;
}

// Evaluators a mode needs; absent members are only legal for modes that do
// not use them.
struct EvaluatorSet {
    std::shared_ptr<const EntityExtractor> extractor;
    std::shared_ptr<const SimilarityBackend> similarity;
    std::shared_ptr<const LlmJudge> judge;
    StatisticalConfig statistical;
};

class Evaluator {
public:
    explicit Evaluator(EvaluatorSet set) : set_(std::move(set)) { set_.statistical.validate(); }

    EvaluationReport evaluate(const ClaimRecord& claim, const Decomposition& d, EvaluationMode mode) const {
        if (d.sub_claims.empty()) throw PreconditionError("decomposition of claim " + claim.id + " is empty");
        EvaluationReport report;
        report.claim_id = claim.id;
        report.subclaim_count = d.size();

        const bool need_stats = mode != EvaluationMode::Llm;
        if (need_stats) run_statistical(claim, d, mode, report);

        for (MetricKind m : kAllMetrics) {
            if (routed_source(mode, m) != ScoreSource::Llm) continue;
            if (!set_.judge) throw EvaluationError(std::string(to_string(m)), "no judge configured");
            report.metrics[m] = set_.judge->evaluate_metric(m, claim, d);
        }
        return report;
    }

private:
    void run_statistical(const ClaimRecord& claim, const Decomposition& d, EvaluationMode mode,
                         EvaluationReport& report) const {
        if (!set_.extractor) throw EvaluationError("atomicity", "no entity extractor configured");
        auto& diag = report.diagnostics;
        try {
            diag.claim_entities = set_.extractor->entities_of_claim(claim.claim);
            diag.annotations.reserve(d.size());
            for (const auto& sc : d.sub_claims) diag.annotations.push_back(set_.extractor->extract_pairs(sc));
        } catch (const Error& e) {
            throw EvaluationError("extraction", "claim " + claim.id + ": " + e.what());
        }
        const auto& anns = diag.annotations;
        const auto& entities = *diag.claim_entities;

        MetricScores atomicity{ScoreSource::Statistical, {}, std::nullopt};
        for (std::size_t i = 0; i < anns.size(); ++i) {
            atomicity.per_subclaim.push_back(ordinal_to_numeric(score_atomicity(anns[i])));
            if (is_degenerate(anns[i])) diag.degenerate_annotations.push_back(i);
        }

        MetricScores fabrication{ScoreSource::Statistical, {}, std::nullopt};
        for (const auto& a : anns) {
            auto one = score_fabrication(entities, std::span<const EntityAnnotation>(&a, 1), set_.statistical);
            fabrication.per_subclaim.push_back(ordinal_to_numeric(one.level));
        }
        diag.fab = score_fabrication(entities, anns, set_.statistical).fab;

        MetricScores coverage{ScoreSource::Statistical, {}, ordinal_to_numeric(score_coverage(entities, anns))};

        std::optional<RedundancyResult> redundancy;
        if (set_.similarity) {
            try {
                redundancy = score_redundancy(d.sub_claims, *set_.similarity, set_.statistical);
            } catch (const Error& e) {
                throw EvaluationError("redundancy", "claim " + claim.id + ": " + e.what());
            }
            diag.red = redundancy->red;
        } else if (routed_source(mode, MetricKind::Redundancy) == ScoreSource::Statistical) {
            throw EvaluationError("redundancy", "no similarity backend configured");
        }

        auto keep = [&](MetricKind m, MetricScores s) {
            if (routed_source(mode, m) == ScoreSource::Statistical) report.metrics[m] = std::move(s);
        };
        keep(MetricKind::Atomicity, std::move(atomicity));
        keep(MetricKind::Fabrication, std::move(fabrication));
        keep(MetricKind::Coverage, std::move(coverage));
        if (redundancy) {
            keep(MetricKind::Redundancy,
                 MetricScores{ScoreSource::Statistical, {}, ordinal_to_numeric(redundancy->level)});
        }
    }

    EvaluatorSet set_;
};

// Dataset-level mean of each metric's claim-level numeric score. Metrics
// absent from a report are skipped for that report.
inline std::map<MetricKind, double> summarize_reports(std::span<const EvaluationReport> reports) {
    if (reports.empty()) throw PreconditionError("no evaluation reports to summarize");
    std::map<MetricKind, double> sums;
    std::map<MetricKind, std::size_t> counts;
    for (const auto& r : reports) {
        for (const auto& [m, s] : r.metrics) {
            sums[m] += s.mean();
            ++counts[m];
        }
    }
    std::map<MetricKind, double> out;
    for (const auto& [m, total] : sums) out[m] = total / static_cast<double>(counts[m]);
    return out;
}

} // namespace factlens

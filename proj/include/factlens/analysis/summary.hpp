#pragma once

// Dataset-level analyses over a finished run: metric means, binned
// verification tables, the quality-feature regression and agreement with
// human scores.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "factlens/analysis/agreement.hpp"
#include "factlens/analysis/binning.hpp"
#include "factlens/analysis/classification.hpp"
#include "factlens/analysis/correlation.hpp"
#include "factlens/analysis/logistic.hpp"
#include "factlens/eval_ensemble.hpp"
#include "factlens/results.hpp"

namespace factlens::analysis {

inline constexpr std::array<MetricKind, 4> kRegressionFeatures = {
    MetricKind::Atomicity, MetricKind::Sufficiency, MetricKind::Fabrication, MetricKind::Coverage};

struct RegressionSummary {
    std::size_t instances = 0;
    std::optional<RegressionModel> model;
    std::optional<ClassificationMetrics> training;  // training-set fit
    std::optional<std::string> warning;
};

struct HumanAgreement {
    std::size_t items = 0;  // instances with both evaluator and human scores
    std::optional<CorrelationResult> correlation;
    std::optional<AgreementResult> evaluator_alpha;
    std::optional<AgreementResult> annotator_alpha;
    std::vector<std::string> warnings;
};

struct AnalysisResults {
    std::map<MetricKind, double> metric_means;
    std::vector<MetricBinTable> metric_bins;
    std::optional<ComplexityTable> complexity;
    std::optional<ClassificationMetrics> fine_grained;
    std::optional<ClassificationMetrics> holistic;
    RegressionSummary regression;
    std::map<MetricKind, HumanAgreement> human_agreement;
};

// Target: whether the aggregated fine-grained label matches gold.
inline RegressionSummary fit_quality_regression(const std::vector<InstanceResult>& instances, double l2) {
    RegressionSummary out;
    Matrix x;
    std::vector<bool> y;
    for (const auto& r : instances) {
        if (!r.evaluation || !r.verification || r.decomposition.size() <= 1) continue;
        std::vector<double> row;
        for (MetricKind m : kRegressionFeatures) {
            if (auto v = r.evaluation->mean(m)) row.push_back(*v);
        }
        if (row.size() != kRegressionFeatures.size()) continue;
        x.push_back(std::move(row));
        y.push_back(r.verification->aggregated_label == r.record.gold_label);
    }
    out.instances = x.size();
    if (x.empty()) {
        out.warning = "no multi-sub-claim instances with all four feature metrics";
        return out;
    }
    const auto positives = std::count(y.begin(), y.end(), true);
    if (positives == 0 || positives == static_cast<long>(y.size())) {
        out.warning = "targets contain a single class";
        return out;
    }
    LogisticOptions opts;
    opts.l2 = l2;
    out.model = fit_logistic(x, y, opts);
    std::vector<bool> pred;
    for (const auto& row : x) pred.push_back(out.model->predict(row));
    out.training = classification_metrics(pred, y);
    return out;
}

inline HumanAgreement human_agreement_for(const std::vector<InstanceResult>& instances, MetricKind metric) {
    HumanAgreement out;
    std::vector<double> evaluator, human;
    RatingMatrix paired, annotators;
    for (const auto& r : instances) {
        auto it = r.human_scores.find(metric);
        if (it == r.human_scores.end() || it->second.empty()) continue;
        const auto& levels = it->second;
        std::vector<std::optional<int>> row(levels.begin(), levels.end());
        annotators.push_back(std::move(row));
        if (!r.evaluation || !r.evaluation->has(metric)) continue;
        const double h = aggregate_numeric(levels);
        evaluator.push_back(*r.evaluation->mean(metric));
        human.push_back(h);
        paired.push_back({ordinal_to_numeric(*r.evaluation->level(metric)), ordinal_to_numeric(numeric_to_level(h))});
    }
    out.items = evaluator.size();
    try {
        out.correlation = correlate(evaluator, human);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("correlation: ") + e.what());
    }
    try {
        out.evaluator_alpha = krippendorff_ordinal(paired);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("evaluator alpha: ") + e.what());
    }
    try {
        out.annotator_alpha = krippendorff_ordinal(annotators);
    } catch (const Error& e) {
        out.warnings.push_back(std::string("annotator alpha: ") + e.what());
    }
    return out;
}

inline AnalysisResults analyze_run(const RunResults& run, double l2) {
    AnalysisResults out;
    std::vector<EvaluationReport> reports;
    std::vector<VerificationOutcome> outcomes;
    std::vector<bool> golds;           // aligned with `outcomes`
    std::vector<EvaluationReport> rv;  // reports of instances that were also verified
    std::vector<VerificationOutcome> ov;
    std::vector<bool> gv;
    for (const auto& r : run.instances) {
        if (r.evaluation) reports.push_back(*r.evaluation);
        if (r.verification) {
            outcomes.push_back(*r.verification);
            golds.push_back(r.record.gold_label);
            if (r.evaluation) {
                rv.push_back(*r.evaluation);
                ov.push_back(*r.verification);
                gv.push_back(r.record.gold_label);
            }
        }
    }
    if (!reports.empty()) out.metric_means = summarize_reports(reports);
    if (!rv.empty()) {
        for (MetricKind m : kAllMetrics) {
            bool scored = false;
            for (const auto& r : rv) scored = scored || r.has(m);
            if (scored) out.metric_bins.push_back(bin_by_metric_level(rv, ov, gv, m));
        }
    }
    if (!outcomes.empty()) {
        out.complexity = bin_by_subclaim_count(outcomes, golds);
        std::vector<bool> fine, hol;
        bool all_holistic = true;
        for (const auto& o : outcomes) {
            fine.push_back(o.aggregated_label);
            if (o.holistic_label) hol.push_back(*o.holistic_label);
            else all_holistic = false;
        }
        out.fine_grained = classification_metrics(fine, golds);
        if (all_holistic) out.holistic = classification_metrics(hol, golds);
    }
    out.regression = fit_quality_regression(run.instances, l2);

    std::set<MetricKind> annotated;
    for (const auto& r : run.instances) {
        for (const auto& [m, levels] : r.human_scores) {
            if (!levels.empty()) annotated.insert(m);
        }
    }
    for (MetricKind m : annotated) out.human_agreement[m] = human_agreement_for(run.instances, m);
    return out;
}

} // namespace factlens::analysis

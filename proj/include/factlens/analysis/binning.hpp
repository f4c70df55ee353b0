#pragma once

// Verification performance grouped by sub-claim quality level and by
// claim complexity (number of sub-claims).

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factlens/analysis/classification.hpp"
#include "factlens/core.hpp"
#include "factlens/error.hpp"

namespace factlens::analysis {

struct LevelBin {
    std::size_t count = 0;
    std::optional<ClassificationMetrics> metrics;  // absent for an empty bin
};

struct MetricBinTable {
    MetricKind metric = MetricKind::Atomicity;
    std::map<OrdinalScore, LevelBin> bins;  // always holds Low, Medium and High
    std::size_t considered = 0;             // instances with more than one sub-claim
    std::optional<std::string> warning;
};

// Only instances with more than one sub-claim are binned. Per-sub-claim
// metrics bin on numeric_to_level of their claim-level mean.
inline MetricBinTable bin_by_metric_level(std::span<const EvaluationReport> reports,
                                          std::span<const VerificationOutcome> outcomes,
                                          const std::vector<bool>& golds, MetricKind metric) {
    if (reports.size() != outcomes.size() || reports.size() != golds.size()) {
        throw StatisticsError("binning inputs are not aligned");
    }
    MetricBinTable table;
    table.metric = metric;
    std::map<OrdinalScore, std::pair<std::vector<bool>, std::vector<bool>>> groups;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i].claim_id != outcomes[i].claim_id) throw StatisticsError("binning inputs are not aligned");
        if (outcomes[i].subclaim_count() <= 1) continue;
        auto level = reports[i].level(metric);
        if (!level) continue;
        ++table.considered;
        groups[*level].first.push_back(outcomes[i].aggregated_label);
        groups[*level].second.push_back(golds[i]);
    }
    for (OrdinalScore level : {OrdinalScore::Low, OrdinalScore::Medium, OrdinalScore::High}) {
        LevelBin bin;
        auto it = groups.find(level);
        if (it != groups.end()) {
            bin.count = it->second.first.size();
            bin.metrics = classification_metrics(it->second.first, it->second.second);
        }
        table.bins[level] = bin;
    }
    if (table.considered == 0) table.warning = "no multi-sub-claim instances to bin";
    return table;
}

struct ComplexityBin {
    std::size_t count = 0;
    ClassificationMetrics fine_grained;
    std::optional<ClassificationMetrics> holistic;
};

struct ComplexityTable {
    std::map<std::size_t, ComplexityBin> bins;            // keyed by sub-claim count
    std::map<std::size_t, std::size_t> distribution;      // n -> instances
};

// Holistic metrics appear for a bin only when every instance in it carries
// a holistic label.
inline ComplexityTable bin_by_subclaim_count(std::span<const VerificationOutcome> outcomes,
                                             const std::vector<bool>& golds) {
    if (outcomes.size() != golds.size()) throw StatisticsError("binning inputs are not aligned");
    struct Group {
        std::vector<bool> fine, holistic, gold;
        bool all_holistic = true;
    };
    std::map<std::size_t, Group> groups;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto& g = groups[outcomes[i].subclaim_count()];
        g.fine.push_back(outcomes[i].aggregated_label);
        g.gold.push_back(golds[i]);
        if (outcomes[i].holistic_label) g.holistic.push_back(*outcomes[i].holistic_label);
        else g.all_holistic = false;
    }
    ComplexityTable table;
    for (const auto& [n, g] : groups) {
        ComplexityBin bin;
        bin.count = g.gold.size();
        bin.fine_grained = classification_metrics(g.fine, g.gold);
        if (g.all_holistic) bin.holistic = classification_metrics(g.holistic, g.gold);
        table.bins[n] = bin;
        table.distribution[n] = bin.count;
    }
    return table;
}

} // namespace factlens::analysis

#pragma once

// Binary classification metrics reported for both classes and macro-averaged.

#include <vector>

#include "factlens/error.hpp"

namespace factlens::analysis {

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;  // gold instances of this class
};

struct ClassificationMetrics {
    ClassScores positive;  // class "true" (supported)
    ClassScores negative;  // class "false" (refuted)
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double accuracy = 0.0;
    std::size_t count = 0;
};

inline double f1_score(double precision, double recall) noexcept {
    return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

inline ClassificationMetrics classification_metrics(const std::vector<bool>& predicted, const std::vector<bool>& gold) {
    if (predicted.size() != gold.size()) throw StatisticsError("predicted and gold labels differ in length");
    if (predicted.empty()) throw StatisticsError("no labels to score");
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (predicted[i] && gold[i]) ++tp;
        else if (predicted[i] && !gold[i]) ++fp;
        else if (!predicted[i] && gold[i]) ++fn;
        else ++tn;
    }
    auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    auto scores = [&](std::size_t hit, std::size_t false_alarm, std::size_t miss) {
        ClassScores s;
        s.precision = ratio(hit, hit + false_alarm);
        s.recall = ratio(hit, hit + miss);
        s.f1 = f1_score(s.precision, s.recall);
        s.support = hit + miss;
        return s;
    };
    ClassificationMetrics m;
    m.positive = scores(tp, fp, fn);
    m.negative = scores(tn, fn, fp);
    m.macro_precision = (m.positive.precision + m.negative.precision) / 2.0;
    m.macro_recall = (m.positive.recall + m.negative.recall) / 2.0;
    m.macro_f1 = (m.positive.f1 + m.negative.f1) / 2.0;
    m.accuracy = ratio(tp + tn, gold.size());
    m.count = gold.size();
    return m;
}

} // namespace factlens::analysis

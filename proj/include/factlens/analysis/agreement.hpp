#pragma once

// Krippendorff's alpha with the ordinal difference function.

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "factlens/error.hpp"

namespace factlens::analysis {

struct AgreementResult {
    double alpha = 1.0;
    std::size_t raters = 0;
    std::size_t items = 0;
    std::size_t pairable_values = 0;  // n in the coincidence matrix
};

// Rows are items, columns raters; std::nullopt marks a missing rating.
using RatingMatrix = std::vector<std::vector<std::optional<int>>>;

// alpha = 1 - D_o / D_e over the coincidence matrix of pairable values, with
// delta^2(c, k) = (sum_{g=c..k} n_g - (n_c + n_k) / 2)^2. Items with fewer
// than two ratings are not pairable and drop out.
inline AgreementResult krippendorff_ordinal(const RatingMatrix& ratings) {
    AgreementResult result;
    result.items = ratings.size();
    for (const auto& row : ratings) result.raters = std::max(result.raters, row.size());

    std::map<int, std::map<int, double>> coincidence;
    for (const auto& row : ratings) {
        std::vector<int> values;
        for (const auto& v : row) {
            if (v) values.push_back(*v);
        }
        if (values.size() < 2) continue;
        const double weight = 1.0 / static_cast<double>(values.size() - 1);
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = 0; j < values.size(); ++j) {
                if (i != j) coincidence[values[i]][values[j]] += weight;
            }
        }
    }

    std::map<int, double> marginals;
    double n = 0.0;
    for (const auto& [c, row] : coincidence) {
        for (const auto& [k, o] : row) {
            marginals[c] += o;
            n += o;
        }
    }
    if (n < 2.0) throw StatisticsError("Krippendorff's alpha needs at least two pairable ratings");
    result.pairable_values = static_cast<std::size_t>(n + 0.5);

    std::vector<int> levels;
    std::vector<double> counts;
    for (const auto& [c, nc] : marginals) {
        levels.push_back(c);
        counts.push_back(nc);
    }
    auto delta2 = [&](std::size_t a, std::size_t b) {
        if (a > b) std::swap(a, b);
        double s = 0.0;
        for (std::size_t g = a; g <= b; ++g) s += counts[g];
        s -= (counts[a] + counts[b]) / 2.0;
        return s * s;
    };

    double observed = 0.0;
    double expected = 0.0;
    for (std::size_t a = 0; a < levels.size(); ++a) {
        for (std::size_t b = 0; b < levels.size(); ++b) {
            if (a == b) continue;
            const double d = delta2(a, b);
            auto row = coincidence.find(levels[a]);
            auto cell = row->second.find(levels[b]);
            if (cell != row->second.end()) observed += cell->second * d;
            expected += counts[a] * counts[b] * d;
        }
    }
    observed /= n;
    expected /= n * (n - 1.0);
    // Zero observed disagreement (including single-valued data) is perfect agreement.
    result.alpha = observed == 0.0 ? 1.0 : 1.0 - observed / expected;
    return result;
}

} // namespace factlens::analysis

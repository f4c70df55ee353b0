#pragma once

// Pearson and Spearman correlation with two-sided p-values from the
// t approximation, t = r * sqrt((n - 2) / (1 - r^2)), df = n - 2.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "factlens/analysis/special_functions.hpp"
#include "factlens/error.hpp"

namespace factlens::analysis {

struct CorrelationTest {
    double statistic = 0.0;  // r or rho, in [-1, 1]
    double p_value = 1.0;
    std::size_t n = 0;
};

struct CorrelationResult {
    double r = 0.0;
    double rho = 0.0;
    double p_r = 1.0;
    double p_rho = 1.0;
    std::size_t n = 0;
};

inline double correlation_p_value(double r, std::size_t n) {
    if (n < 3) throw StatisticsError("correlation p-value needs n >= 3");
    const double df = static_cast<double>(n - 2);
    const double one_minus = 1.0 - r * r;
    if (one_minus <= 0.0) return 0.0;
    return std::clamp(student_t_two_sided_p(r * std::sqrt(df / one_minus), df), 0.0, 1.0);
}

namespace detail {

inline void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StatisticsError("correlation inputs differ in length");
    if (x.size() < 3) throw StatisticsError("correlation needs at least 3 observations");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw StatisticsError("correlation input is not finite");
    }
}

inline double pearson_r(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw StatisticsError("correlation undefined for a constant vector");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

} // namespace detail

// 1-based ranks; ties share the average of the ranks they span.
inline std::vector<double> mid_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

inline CorrelationTest pearson(std::span<const double> x, std::span<const double> y) {
    detail::check_pair(x, y);
    const double r = detail::pearson_r(x, y);
    return {r, correlation_p_value(r, x.size()), x.size()};
}

inline CorrelationTest spearman(std::span<const double> x, std::span<const double> y) {
    detail::check_pair(x, y);
    const auto rx = mid_ranks(x);
    const auto ry = mid_ranks(y);
    const double rho = detail::pearson_r(rx, ry);
    return {rho, correlation_p_value(rho, x.size()), x.size()};
}

inline CorrelationResult correlate(std::span<const double> x, std::span<const double> y) {
    auto p = pearson(x, y);
    auto s = spearman(x, y);
    return {p.statistic, s.statistic, p.p_value, s.p_value, p.n};
}

} // namespace factlens::analysis

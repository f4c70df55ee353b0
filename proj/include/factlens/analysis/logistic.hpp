#pragma once

// L2-regularized logistic regression on z-scored features, fitted by
// gradient descent with Armijo backtracking from a zero start.
//
// Objective over standardized features z:
//   L(w, b) = mean_i[ log(1 + exp(u_i)) - y_i u_i ] + l2 * |w|^2 / 2,
//   u_i = w . z_i + b   (bias unregularized)

#include <algorithm>
#include <cmath>
#include <vector>

#include "factlens/error.hpp"

namespace factlens::analysis {

using Matrix = std::vector<std::vector<double>>;

struct Standardization {
    std::vector<double> means;
    std::vector<double> stds;  // 1.0 where a column is constant

    std::vector<double> apply(const std::vector<double>& row) const {
        std::vector<double> z(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) z[j] = (row[j] - means[j]) / stds[j];
        return z;
    }
};

struct RegressionModel {
    std::vector<double> weights;  // standardized units
    double bias = 0.0;
    Standardization standardization;
    std::size_t iterations = 0;
    bool converged = false;
    double final_loss = 0.0;
    std::vector<double> loss_history;  // loss at the start point and after every step

    double probability(const std::vector<double>& features) const {
        if (features.size() != weights.size()) throw StatisticsError("feature vector length mismatch");
        const auto z = standardization.apply(features);
        double u = bias;
        for (std::size_t j = 0; j < z.size(); ++j) u += weights[j] * z[j];
        return 1.0 / (1.0 + std::exp(-u));
    }

    bool predict(const std::vector<double>& features) const { return probability(features) >= 0.5; }
};

struct LogisticOptions {
    double l2 = 0.0;
    double gradient_tolerance = 1e-8;  // on the infinity norm
    std::size_t max_iterations = 10000;
};

// log(1 + exp(u)) without overflow.
inline double softplus(double u) noexcept { return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

inline double sigmoid(double u) noexcept {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    const double e = std::exp(u);
    return e / (1.0 + e);
}

// Parameters are packed as [w_0 .. w_{d-1}, b]; `z` is already standardized.
inline double logistic_loss(const std::vector<double>& params, const Matrix& z, const std::vector<bool>& y, double l2) {
    const std::size_t d = params.size() - 1;
    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double u = params[d];
        for (std::size_t j = 0; j < d; ++j) u += params[j] * z[i][j];
        loss += softplus(u) - (y[i] ? u : 0.0);
    }
    loss /= static_cast<double>(z.size());
    double reg = 0.0;
    for (std::size_t j = 0; j < d; ++j) reg += params[j] * params[j];
    return loss + 0.5 * l2 * reg;
}

inline std::vector<double> logistic_gradient(const std::vector<double>& params, const Matrix& z,
                                             const std::vector<bool>& y, double l2) {
    const std::size_t d = params.size() - 1;
    std::vector<double> g(params.size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
        double u = params[d];
        for (std::size_t j = 0; j < d; ++j) u += params[j] * z[i][j];
        const double r = sigmoid(u) - (y[i] ? 1.0 : 0.0);
        for (std::size_t j = 0; j < d; ++j) g[j] += r * z[i][j];
        g[d] += r;
    }
    const double inv_n = 1.0 / static_cast<double>(z.size());
    for (auto& v : g) v *= inv_n;
    for (std::size_t j = 0; j < d; ++j) g[j] += l2 * params[j];
    return g;
}

inline Standardization fit_standardization(const Matrix& x) {
    const std::size_t d = x.front().size();
    Standardization s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    const double n = static_cast<double>(x.size());
    for (const auto& row : x) {
        for (std::size_t j = 0; j < d; ++j) s.means[j] += row[j] / n;
    }
    for (const auto& row : x) {
        for (std::size_t j = 0; j < d; ++j) s.stds[j] += (row[j] - s.means[j]) * (row[j] - s.means[j]) / n;
    }
    for (auto& v : s.stds) v = v > 0.0 ? std::sqrt(v) : 1.0;
    return s;
}

inline RegressionModel fit_logistic(const Matrix& features, const std::vector<bool>& targets,
                                    const LogisticOptions& options = {}) {
    if (features.empty() || features.size() != targets.size()) {
        throw StatisticsError("logistic regression needs one target per non-empty feature row");
    }
    const std::size_t d = features.front().size();
    if (d == 0) throw StatisticsError("logistic regression needs at least one feature");
    for (const auto& row : features) {
        if (row.size() != d) throw StatisticsError("ragged feature matrix");
        for (double v : row) {
            if (!std::isfinite(v)) throw StatisticsError("non-finite feature value");
        }
    }
    const auto positives = std::count(targets.begin(), targets.end(), true);
    if (positives == 0 || positives == static_cast<long>(targets.size())) {
        throw StatisticsError("logistic regression needs both classes in the targets");
    }
    if (!(options.l2 >= 0.0)) throw StatisticsError("l2 must be >= 0");

    RegressionModel model;
    model.standardization = fit_standardization(features);
    Matrix z;
    z.reserve(features.size());
    for (const auto& row : features) z.push_back(model.standardization.apply(row));

    std::vector<double> params(d + 1, 0.0);
    double loss = logistic_loss(params, z, targets, options.l2);
    model.loss_history.push_back(loss);
    double step = 1.0;
    constexpr double kArmijo = 1e-4;

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        const auto g = logistic_gradient(params, z, targets, options.l2);
        double gmax = 0.0;
        double gnorm2 = 0.0;
        for (double v : g) {
            gmax = std::max(gmax, std::fabs(v));
            gnorm2 += v * v;
        }
        if (gmax < options.gradient_tolerance) {
            model.converged = true;
            break;
        }
        step = std::min(step * 2.0, 1e6);
        std::vector<double> next(params.size());
        double next_loss = loss;
        for (;;) {
            for (std::size_t j = 0; j < params.size(); ++j) next[j] = params[j] - step * g[j];
            next_loss = logistic_loss(next, z, targets, options.l2);
            if (next_loss <= loss - kArmijo * step * gnorm2) break;
            step *= 0.5;
            if (step < 1e-20) break;
        }
        if (next_loss > loss) break;  // no descent possible at machine precision
        params = std::move(next);
        loss = next_loss;
        model.loss_history.push_back(loss);
        model.iterations = it + 1;
    }

    model.weights.assign(params.begin(), params.end() - 1);
    model.bias = params.back();
    model.final_loss = loss;
    return model;
}

} // namespace factlens::analysis

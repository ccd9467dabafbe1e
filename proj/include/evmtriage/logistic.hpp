// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace evmtriage
{
/// Unpenalized binary logistic regression fitted by gradient ascent with a
/// backtracking (Armijo) line search on the mean log-likelihood. On linearly
/// separable data the likelihood has no finite maximizer; the fit then stops
/// at the iteration cap with converged=false, which in practice acts as
/// early stopping.
struct LogisticModel
{
    std::vector<double> weights;
    double intercept = 0.0;
    bool converged = false;
    size_t iterations_used = 0;

    /// P(class 1). Strictly inside (0,1): the linear score is clamped before
    /// the sigmoid so no rounding to exactly 0 or 1 can occur.
    [[nodiscard]] double predict_proba(const std::vector<double>& row) const
    {
        if (row.size() != weights.size())
            throw ShapeError{"row width does not match weight count"};
        double z = intercept;
        for (size_t j = 0; j < row.size(); ++j)
            z += weights[j] * row[j];
        z = std::clamp(z, -36.0, 36.0);
        return 1.0 / (1.0 + std::exp(-z));
    }
};

namespace detail
{
/// log(sigmoid(z)), computed without overflow for large |z|.
[[nodiscard]] inline double log_sigmoid(double z) noexcept
{
    return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

/// Mean log-likelihood of 0/1 labels under scores z = Xw + b.
[[nodiscard]] inline double mean_log_likelihood(
    const std::vector<double>& scores, const std::vector<int>& y) noexcept
{
    double total = 0.0;
    for (size_t i = 0; i < scores.size(); ++i)
        total += y[i] == 1 ? log_sigmoid(scores[i]) : log_sigmoid(-scores[i]);
    return total / static_cast<double>(scores.size());
}
}  // namespace detail

/// Fits logistic regression on standardized inputs. Iterates full-gradient
/// ascent steps with backtracking until the gradient max-norm of the mean
/// log-likelihood falls below 1e-6 or max_iter steps elapse. Requires both
/// classes in y.
[[nodiscard]] inline LogisticModel fit_logistic(const std::vector<std::vector<double>>& X,
    const std::vector<int>& y, size_t max_iter = 1000)
{
    const auto n = X.size();
    if (n == 0 || y.size() != n)
        throw ShapeError{"X and y row counts differ or are zero"};
    const auto positives = static_cast<size_t>(std::count(y.begin(), y.end(), 1));
    if (positives == 0 || positives == n)
        throw DegenerateLabelsError{"logistic regression requires both classes"};
    const auto d = X[0].size();
    for (const auto& row : X)
    {
        if (row.size() != d)
            throw ShapeError{"ragged design matrix"};
        for (const auto cell : row)
            if (!std::isfinite(cell))
                throw InvalidDataError{"non-finite cell in design matrix"};
    }

    const auto n_real = static_cast<double>(n);
    LogisticModel model;
    model.weights.assign(d, 0.0);

    std::vector<double> scores(n, 0.0);
    auto objective = detail::mean_log_likelihood(scores, y);

    std::vector<double> gradient_w(d);
    std::vector<double> trial_w(d);
    std::vector<double> trial_scores(n);
    constexpr double gradient_tolerance = 1e-6;
    constexpr double armijo = 1e-4;

    for (size_t iteration = 0; iteration < max_iter; ++iteration)
    {
        // ∇ of the mean log-likelihood: (1/n)·Xᵀ(y − p) and (1/n)·Σ(y − p).
        std::fill(gradient_w.begin(), gradient_w.end(), 0.0);
        double gradient_b = 0.0;
        for (size_t i = 0; i < n; ++i)
        {
            const auto z = std::clamp(scores[i], -36.0, 36.0);
            const auto p = 1.0 / (1.0 + std::exp(-z));
            const auto error = static_cast<double>(y[i]) - p;
            gradient_b += error;
            for (size_t j = 0; j < d; ++j)
                gradient_w[j] += error * X[i][j];
        }
        gradient_b /= n_real;
        double gradient_norm_sq = gradient_b * gradient_b;
        double gradient_max = std::abs(gradient_b);
        for (auto& g : gradient_w)
        {
            g /= n_real;
            gradient_norm_sq += g * g;
            gradient_max = std::max(gradient_max, std::abs(g));
        }
        if (gradient_max < gradient_tolerance)
        {
            model.converged = true;
            break;
        }

        // Backtracking line search: halve the step until the Armijo
        // sufficient-increase condition holds. The likelihood is concave, so
        // this always succeeds at some positive step (up to roundoff).
        double step = 1.0;
        bool accepted = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack)
        {
            for (size_t j = 0; j < d; ++j)
                trial_w[j] = model.weights[j] + step * gradient_w[j];
            const auto trial_b = model.intercept + step * gradient_b;
            for (size_t i = 0; i < n; ++i)
            {
                double z = trial_b;
                for (size_t j = 0; j < d; ++j)
                    z += trial_w[j] * X[i][j];
                trial_scores[i] = z;
            }
            const auto trial_objective = detail::mean_log_likelihood(trial_scores, y);
            if (trial_objective >= objective + armijo * step * gradient_norm_sq)
            {
                model.weights = trial_w;
                model.intercept = trial_b;
                scores = trial_scores;
                objective = trial_objective;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;  // step underflow: no further float-representable progress
        model.iterations_used = iteration + 1;
    }
    return model;
}
}  // namespace evmtriage

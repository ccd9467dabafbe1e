// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace evmtriage
{
/// Elastic-net linear regression fitted on standardized inputs, minimizing
///
///   (1/2n)·‖y − Xβ − b‖² + lambda·(alpha·‖β‖₁ + (1−alpha)/2·‖β‖²)
///
/// by cyclic coordinate descent with soft-thresholding. alpha mixes the lasso
/// (alpha=1) and ridge (alpha=0) penalties; lambda is the overall strength.
struct ElasticNetModel
{
    double alpha = 0.0;
    double lambda = 0.0;
    std::vector<double> coefficients;
    double intercept = 0.0;
    bool converged = false;
    size_t sweeps_used = 0;

    [[nodiscard]] double predict_score(const std::vector<double>& row) const
    {
        if (row.size() != coefficients.size())
            throw ShapeError{"row width does not match coefficient count"};
        double score = intercept;
        for (size_t j = 0; j < row.size(); ++j)
            score += coefficients[j] * row[j];
        return score;
    }

    [[nodiscard]] size_t nonzero_count() const noexcept
    {
        size_t count = 0;
        for (const auto coefficient : coefficients)
            if (coefficient != 0.0)
                ++count;
        return count;
    }
};

namespace detail
{
[[nodiscard]] inline double soft_threshold(double value, double threshold) noexcept
{
    if (value > threshold)
        return value - threshold;
    if (value < -threshold)
        return value + threshold;
    return 0.0;
}
}  // namespace detail

/// Fits an elastic net by cyclic coordinate descent. Convergence is declared
/// when no coefficient (intercept included) moves by 1e-6 within a sweep;
/// the sweep budget is 10,000. With lambda=0 the solution is ordinary least
/// squares; with alpha=1 and a large enough lambda every coefficient is
/// exactly zero.
[[nodiscard]] inline ElasticNetModel fit_elastic_net(const std::vector<std::vector<double>>& X,
    const std::vector<double>& y, double alpha, double lambda)
{
    const auto n = X.size();
    if (n == 0 || y.size() != n)
        throw ShapeError{"X and y row counts differ or are zero"};
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidDataError{"alpha must lie in [0, 1]"};
    if (!(lambda >= 0.0))
        throw InvalidDataError{"lambda must be non-negative"};
    const auto d = X[0].size();
    for (const auto& row : X)
    {
        if (row.size() != d)
            throw ShapeError{"ragged design matrix"};
        for (const auto cell : row)
            if (!std::isfinite(cell))
                throw InvalidDataError{"non-finite cell in design matrix"};
    }
    for (const auto target : y)
        if (!std::isfinite(target))
            throw InvalidDataError{"non-finite target value"};

    const auto n_real = static_cast<double>(n);
    // Per-column mean squares (1/n)·Σxᵢⱼ² — exactly 1 for standardized
    // columns, but computed rather than assumed.
    std::vector<double> column_mean_square(d, 0.0);
    for (const auto& row : X)
        for (size_t j = 0; j < d; ++j)
            column_mean_square[j] += row[j] * row[j];
    for (auto& value : column_mean_square)
        value /= n_real;

    ElasticNetModel model;
    model.alpha = alpha;
    model.lambda = lambda;
    model.coefficients.assign(d, 0.0);

    // Running residual r = y − Xβ − b, updated incrementally per coordinate.
    std::vector<double> residual{y};
    double mean_residual = 0.0;
    for (const auto value : residual)
        mean_residual += value;
    mean_residual /= n_real;
    model.intercept = mean_residual;
    for (auto& value : residual)
        value -= model.intercept;

    const auto l1 = lambda * alpha;
    const auto l2 = lambda * (1.0 - alpha);
    constexpr double tolerance = 1e-6;
    constexpr size_t max_sweeps = 10000;

    for (size_t sweep = 0; sweep < max_sweeps; ++sweep)
    {
        double max_change = 0.0;
        for (size_t j = 0; j < d; ++j)
        {
            if (column_mean_square[j] == 0.0)
                continue;  // constant-zero column cannot carry weight
            double partial = 0.0;
            for (size_t i = 0; i < n; ++i)
                partial += X[i][j] * residual[i];
            partial = partial / n_real + column_mean_square[j] * model.coefficients[j];
            const auto updated = detail::soft_threshold(partial, l1) /
                                 (column_mean_square[j] + l2);
            const auto change = updated - model.coefficients[j];
            if (change != 0.0)
            {
                for (size_t i = 0; i < n; ++i)
                    residual[i] -= change * X[i][j];
                model.coefficients[j] = updated;
                max_change = std::max(max_change, std::abs(change));
            }
        }
        double residual_mean = 0.0;
        for (const auto value : residual)
            residual_mean += value;
        residual_mean /= n_real;
        if (residual_mean != 0.0)
        {
            model.intercept += residual_mean;
            for (auto& value : residual)
                value -= residual_mean;
            max_change = std::max(max_change, std::abs(residual_mean));
        }
        model.sweeps_used = sweep + 1;
        if (max_change < tolerance)
        {
            model.converged = true;
            break;
        }
    }
    return model;
}
}  // namespace evmtriage

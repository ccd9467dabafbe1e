// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>
#include <evmtriage/features.hpp>

#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

namespace evmtriage
{
/// Per-column centering/scaling parameters fitted on a matrix. Variance is
/// population (divide-by-n); zero-variance columns are recorded in
/// dropped_columns and excluded from transformed output, so scales are
/// strictly positive for every retained column.
struct Standardization
{
    std::vector<double> means;   ///< per original column
    std::vector<double> scales;  ///< per original column (population sd; 0 for dropped)
    std::set<size_t> dropped_columns;
    std::vector<size_t> retained_columns;  ///< original indices, ascending

    /// Transforms one count row to its standardized retained-column form.
    [[nodiscard]] std::vector<double> apply_row(const std::vector<int64_t>& counts) const
    {
        std::vector<double> out;
        out.reserve(retained_columns.size());
        for (const auto column : retained_columns)
            out.push_back((static_cast<double>(counts.at(column)) - means[column]) /
                          scales[column]);
        return out;
    }

    /// Transforms every row of a matrix sharing the fitted schema width.
    [[nodiscard]] std::vector<std::vector<double>> apply(const FeatureMatrix& matrix) const
    {
        std::vector<std::vector<double>> out;
        out.reserve(matrix.rows.size());
        for (const auto& row : matrix.rows)
        {
            if (row.counts.size() != means.size())
                throw ShapeError{"matrix width does not match standardization"};
            out.push_back(apply_row(row.counts));
        }
        return out;
    }

    /// Inverts a standardized retained-column row back to original units.
    [[nodiscard]] std::vector<double> invert_row(const std::vector<double>& standardized) const
    {
        if (standardized.size() != retained_columns.size())
            throw ShapeError{"row width does not match retained column count"};
        std::vector<double> out;
        out.reserve(standardized.size());
        for (size_t i = 0; i < standardized.size(); ++i)
        {
            const auto column = retained_columns[i];
            out.push_back(standardized[i] * scales[column] + means[column]);
        }
        return out;
    }
};

/// Fits per-column mean and population standard deviation on a matrix with at
/// least two rows. Constant columns are dropped rather than divided by zero;
/// tree models, which need no scaling, use the raw counts instead.
[[nodiscard]] inline Standardization fit_standardization(const FeatureMatrix& matrix)
{
    const auto n = matrix.rows.size();
    if (n < 2)
        throw InsufficientDataError{"standardization requires at least 2 rows"};
    const auto columns = matrix.column_count();

    Standardization std_params;
    std_params.means.assign(columns, 0.0);
    std_params.scales.assign(columns, 0.0);
    for (const auto& row : matrix.rows)
    {
        if (row.counts.size() != columns)
            throw ShapeError{"ragged feature matrix"};
        for (size_t j = 0; j < columns; ++j)
            std_params.means[j] += static_cast<double>(row.counts[j]);
    }
    for (auto& mean : std_params.means)
        mean /= static_cast<double>(n);

    for (const auto& row : matrix.rows)
        for (size_t j = 0; j < columns; ++j)
        {
            const auto centered = static_cast<double>(row.counts[j]) - std_params.means[j];
            std_params.scales[j] += centered * centered;
        }
    for (size_t j = 0; j < columns; ++j)
    {
        const auto variance = std_params.scales[j] / static_cast<double>(n);
        const auto scale = std::sqrt(variance);
        if (scale > 0.0)
        {
            std_params.scales[j] = scale;
            std_params.retained_columns.push_back(j);
        }
        else
        {
            std_params.scales[j] = 0.0;
            std_params.dropped_columns.insert(j);
        }
    }
    return std_params;
}
}  // namespace evmtriage

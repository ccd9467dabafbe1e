// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>
#include <evmtriage/features.hpp>
#include <evmtriage/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace evmtriage
{
/// Balances a two-class matrix by under-sampling: all minority rows are kept
/// and an equal number of majority rows is drawn uniformly without
/// replacement. Row order follows the input. An already balanced matrix is
/// returned unchanged.
[[nodiscard]] inline FeatureMatrix undersample(const FeatureMatrix& matrix, uint64_t seed)
{
    std::vector<size_t> violation_rows;
    std::vector<size_t> legitimate_rows;
    for (size_t i = 0; i < matrix.labels.size(); ++i)
        (matrix.labels[i] == Label::violation ? violation_rows : legitimate_rows).push_back(i);
    if (violation_rows.empty() || legitimate_rows.empty())
        throw DegenerateLabelsError{"undersample requires both classes"};
    if (violation_rows.size() == legitimate_rows.size())
        return matrix;

    auto& majority = violation_rows.size() > legitimate_rows.size() ? violation_rows :
                                                                      legitimate_rows;
    const auto minority_count = std::min(violation_rows.size(), legitimate_rows.size());
    auto rng = derive_rng(seed, rng_stream::undersample);
    auto kept_majority = sample_without_replacement(majority.size(), minority_count, rng);
    for (auto& index : kept_majority)
        index = majority[index];
    majority = std::move(kept_majority);

    std::vector<size_t> selected;
    selected.reserve(2 * minority_count);
    selected.insert(selected.end(), violation_rows.begin(), violation_rows.end());
    selected.insert(selected.end(), legitimate_rows.begin(), legitimate_rows.end());
    std::sort(selected.begin(), selected.end());
    return matrix.select_rows(selected);
}

/// Rounds half away from zero, fixing the train size deterministically
/// (e.g. 94 rows at fraction 0.7 → 66 train rows).
[[nodiscard]] inline size_t round_half_away(double value)
{
    return static_cast<size_t>(std::llround(value));
}

struct SplitResult
{
    FeatureMatrix train;
    FeatureMatrix test;
};

/// Uniform random train/test partition with |train| = round(fraction·n).
/// Unstratified, but the train side must contain both classes: the partition
/// is redrawn up to 100 times, after which a stratification error is raised.
/// Requires at least two rows of each class.
[[nodiscard]] inline SplitResult split(
    const FeatureMatrix& matrix, double train_fraction, uint64_t seed)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidDataError{"train_fraction must lie in (0, 1)"};
    const auto n = matrix.rows.size();
    if (matrix.count(Label::violation) < 2 || matrix.count(Label::legitimate) < 2)
        throw InsufficientDataError{"split requires at least 2 rows per class"};

    const auto train_size = round_half_away(train_fraction * static_cast<double>(n));
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i)
        order[i] = i;

    auto rng = derive_rng(seed, rng_stream::split);
    for (int attempt = 0; attempt < 100; ++attempt)
    {
        shuffle(order, rng);
        bool has_violation = false;
        bool has_legitimate = false;
        for (size_t i = 0; i < train_size; ++i)
            (matrix.labels[order[i]] == Label::violation ? has_violation : has_legitimate) = true;
        if (has_violation && has_legitimate)
        {
            std::vector<size_t> train_rows{order.begin(),
                order.begin() + static_cast<ptrdiff_t>(train_size)};
            std::vector<size_t> test_rows{
                order.begin() + static_cast<ptrdiff_t>(train_size), order.end()};
            std::sort(train_rows.begin(), train_rows.end());
            std::sort(test_rows.begin(), test_rows.end());
            return {matrix.select_rows(train_rows), matrix.select_rows(test_rows)};
        }
    }
    throw StratificationError{"no two-class train set in 100 partition attempts"};
}
}  // namespace evmtriage

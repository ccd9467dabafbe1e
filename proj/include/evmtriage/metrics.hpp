// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>
#include <evmtriage/label.hpp>

#include <array>
#include <cstddef>
#include <vector>

namespace evmtriage
{
/// Accuracy plus support-weighted precision/recall/F1 over the classes
/// present in the truth vector.
struct Metrics
{
    double accuracy = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
};

/// Computes classification metrics from truth/prediction vectors.
///
/// Per-class precision is TP/(TP+FP), defined as 0 when the class is never
/// predicted; recall is TP/(TP+FN); F1 is their harmonic mean (0 when both
/// are 0). Weighted versions average per-class values weighted by the class's
/// share of y_true; classes absent from y_true contribute nothing.
[[nodiscard]] inline Metrics weighted_metrics(
    const std::vector<Label>& y_true, const std::vector<Label>& y_pred)
{
    if (y_true.size() != y_pred.size())
        throw ShapeError{"y_true and y_pred lengths differ"};
    if (y_true.empty())
        throw ShapeError{"empty label vectors"};

    // confusion[t][p]: rows true class, columns predicted class
    std::array<std::array<size_t, 2>, 2> confusion{};
    for (size_t i = 0; i < y_true.size(); ++i)
        ++confusion[static_cast<size_t>(y_true[i])][static_cast<size_t>(y_pred[i])];

    const auto total = static_cast<double>(y_true.size());
    Metrics metrics;
    metrics.accuracy = (static_cast<double>(confusion[0][0] + confusion[1][1])) / total;
    for (size_t c = 0; c < 2; ++c)
    {
        const auto support = confusion[c][0] + confusion[c][1];
        if (support == 0)
            continue;
        const auto tp = static_cast<double>(confusion[c][c]);
        const auto predicted = static_cast<double>(confusion[0][c] + confusion[1][c]);
        const auto precision = predicted > 0.0 ? tp / predicted : 0.0;
        const auto recall = tp / static_cast<double>(support);
        const auto f1 =
            (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        const auto weight = static_cast<double>(support) / total;
        metrics.weighted_precision += weight * precision;
        metrics.weighted_recall += weight * recall;
        metrics.weighted_f1 += weight * f1;
    }
    return metrics;
}
}  // namespace evmtriage

// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmtriage/metrics.hpp>
#include <evmtriage/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace evmtriage;

namespace
{
/// Independent oracle: recomputes the same quantities from scratch with a
/// different code path (per-pair counting, no confusion matrix).
Metrics oracle_metrics(const std::vector<Label>& y_true, const std::vector<Label>& y_pred)
{
    const auto n = static_cast<double>(y_true.size());
    Metrics out;

    size_t correct = 0;
    for (size_t i = 0; i < y_true.size(); ++i)
        if (y_true[i] == y_pred[i])
            ++correct;
    out.accuracy = static_cast<double>(correct) / n;

    for (const auto cls : {Label::legitimate, Label::violation})
    {
        size_t tp = 0;
        size_t fp = 0;
        size_t fn = 0;
        size_t support = 0;
        for (size_t i = 0; i < y_true.size(); ++i)
        {
            if (y_true[i] == cls)
            {
                ++support;
                if (y_pred[i] == cls)
                    ++tp;
                else
                    ++fn;
            }
            else if (y_pred[i] == cls)
            {
                ++fp;
            }
        }
        if (support == 0)
            continue;
        const auto precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const auto recall = static_cast<double>(tp) / (tp + fn);
        const auto f1 = precision + recall > 0.0
                            ? 2.0 * precision * recall / (precision + recall)
                            : 0.0;
        const auto weight = static_cast<double>(support) / n;
        out.weighted_precision += weight * precision;
        out.weighted_recall += weight * recall;
        out.weighted_f1 += weight * f1;
    }
    return out;
}

Label bit(uint64_t value)
{
    return value != 0 ? Label::violation : Label::legitimate;
}
}  // namespace

TEST(Metrics, HandWorkedExample)
{
    // truth [1,1,0,0], pred [1,0,0,0]:
    //   class 1: TP=1 FP=0 FN=1 → P=1, R=0.5, F1=2/3, weight 0.5
    //   class 0: TP=2 FP=1 FN=0 → P=2/3, R=1, F1=0.8, weight 0.5
    const std::vector<Label> truth{
        Label::violation, Label::violation, Label::legitimate, Label::legitimate};
    const std::vector<Label> pred{
        Label::violation, Label::legitimate, Label::legitimate, Label::legitimate};
    const auto m = weighted_metrics(truth, pred);
    EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
    EXPECT_DOUBLE_EQ(m.weighted_precision, 0.5 * 1.0 + 0.5 * 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.weighted_recall, 0.75);
    EXPECT_DOUBLE_EQ(m.weighted_f1, 0.5 * (2.0 / 3.0) + 0.5 * 0.8);
}

TEST(Metrics, AllOneClassPredictionOnBalancedTruth)
{
    // Predicting a single class on a balanced truth vector: the never-predicted
    // class has precision 0 (by definition) and recall 0, so weighted P is
    // 0.5·0.5 + 0.5·0 = 0.25 and weighted F1 is 0.5·(2·0.5·1/(0.5+1)) = 1/3.
    const std::vector<Label> truth{
        Label::violation, Label::violation, Label::legitimate, Label::legitimate};
    const std::vector<Label> pred(4, Label::violation);
    const auto m = weighted_metrics(truth, pred);
    EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
    EXPECT_DOUBLE_EQ(m.weighted_recall, 0.5);
    EXPECT_DOUBLE_EQ(m.weighted_precision, 0.25);
    EXPECT_DOUBLE_EQ(m.weighted_f1, 1.0 / 3.0);
}

TEST(Metrics, PerfectPrediction)
{
    const std::vector<Label> truth{Label::violation, Label::legitimate, Label::violation};
    const auto m = weighted_metrics(truth, truth);
    EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
    EXPECT_DOUBLE_EQ(m.weighted_precision, 1.0);
    EXPECT_DOUBLE_EQ(m.weighted_recall, 1.0);
    EXPECT_DOUBLE_EQ(m.weighted_f1, 1.0);
}

TEST(Metrics, MatchesIndependentOracleOnRandomVectors)
{
    auto rng = SplitMix64{2024};
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto n = 1 + rng.next_below(64);
        std::vector<Label> truth;
        std::vector<Label> pred;
        for (uint64_t i = 0; i < n; ++i)
        {
            truth.push_back(bit(rng.next() & 1));
            pred.push_back(bit(rng.next() & 1));
        }
        const auto actual = weighted_metrics(truth, pred);
        const auto expected = oracle_metrics(truth, pred);
        EXPECT_NEAR(actual.accuracy, expected.accuracy, 1e-12);
        EXPECT_NEAR(actual.weighted_precision, expected.weighted_precision, 1e-12);
        EXPECT_NEAR(actual.weighted_recall, expected.weighted_recall, 1e-12);
        EXPECT_NEAR(actual.weighted_f1, expected.weighted_f1, 1e-12);
    }
}

TEST(Metrics, WeightedRecallEqualsAccuracy)
{
    // Support-weighted recall is Σ_c (support_c/n)·(TP_c/support_c) = Σ TP_c / n,
    // which is exactly accuracy whenever every truth class is represented.
    auto rng = SplitMix64{7};
    for (int trial = 0; trial < 50; ++trial)
    {
        std::vector<Label> truth{Label::violation, Label::legitimate};
        std::vector<Label> pred{bit(rng.next() & 1), bit(rng.next() & 1)};
        const auto extra = rng.next_below(30);
        for (uint64_t i = 0; i < extra; ++i)
        {
            truth.push_back(bit(rng.next() & 1));
            pred.push_back(bit(rng.next() & 1));
        }
        const auto m = weighted_metrics(truth, pred);
        EXPECT_NEAR(m.weighted_recall, m.accuracy, 1e-12);
    }
}

TEST(Metrics, SingleClassTruthIgnoresAbsentClass)
{
    const std::vector<Label> truth(3, Label::violation);
    const std::vector<Label> pred{Label::violation, Label::violation, Label::legitimate};
    const auto m = weighted_metrics(truth, pred);
    // Only the violation class carries weight: P=1 (2 predicted, 2 correct),
    // R=2/3.
    EXPECT_DOUBLE_EQ(m.weighted_precision, 1.0);
    EXPECT_NEAR(m.weighted_recall, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(m.accuracy, 2.0 / 3.0, 1e-12);
}

TEST(Metrics, RejectsShapeMismatch)
{
    EXPECT_THROW(
        weighted_metrics({Label::violation}, {Label::violation, Label::violation}), ShapeError);
    EXPECT_THROW(weighted_metrics({}, {}), ShapeError);
}

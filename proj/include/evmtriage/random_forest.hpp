// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>
#include <evmtriage/rng.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace evmtriage
{
/// One node of a fitted decision tree. Internal nodes route row x left when
/// x[split_feature] <= threshold, where threshold is the largest observed
/// left-routed training value — not a midpoint — so predictions are invariant
/// under strictly monotone per-feature transforms applied at both train and
/// predict time. Leaves carry the class counts of the rows routed to them.
struct TreeNode
{
    int32_t split_feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;
    uint32_t left = 0;
    uint32_t right = 0;
    std::array<int64_t, 2> class_counts{};

    [[nodiscard]] bool is_leaf() const noexcept { return split_feature < 0; }
};

/// A CART-style binary classification tree stored as a node arena with the
/// root at index 0.
struct DecisionTree
{
    std::vector<TreeNode> nodes;

    /// Leaf majority class; ties go to the violation class (1).
    [[nodiscard]] int predict(const std::vector<double>& row) const
    {
        const auto* node = &nodes.at(0);
        while (!node->is_leaf())
        {
            const auto value = row.at(static_cast<size_t>(node->split_feature));
            node = &nodes[value <= node->threshold ? node->left : node->right];
        }
        return node->class_counts[1] >= node->class_counts[0] ? 1 : 0;
    }
};

struct ForestConfig
{
    size_t n_trees = 100;
    /// Candidate features per split; 0 means the ⌊√d⌋ default.
    size_t features_per_split = 0;
    uint64_t seed = 0;
    size_t max_depth = std::numeric_limits<size_t>::max();
    size_t min_samples_split = 2;
    /// When false every tree trains on the full sample instead of a
    /// bootstrap draw — with features_per_split = d this reduces the forest
    /// to deterministic CART, which the test suite exploits for oracle
    /// comparisons.
    bool bootstrap = true;
};

/// A bagged ensemble of Gini-split decision trees with per-node feature
/// subsampling. Feature importances are the per-tree-normalized mean decrease
/// in Gini impurity, averaged across trees and renormalized to sum 1.
struct RandomForestModel
{
    std::vector<DecisionTree> trees;
    ForestConfig config;
    std::vector<double> importances;

    /// Majority vote across trees; ties go to the violation class (1).
    [[nodiscard]] int predict(const std::vector<double>& row) const
    {
        if (trees.empty())
            throw StateError{"predict on unfitted forest"};
        size_t votes = 0;
        for (const auto& tree : trees)
            votes += static_cast<size_t>(tree.predict(row));
        return 2 * votes >= trees.size() ? 1 : 0;
    }

    [[nodiscard]] std::vector<int> predict(const std::vector<std::vector<double>>& X) const
    {
        std::vector<int> out;
        out.reserve(X.size());
        for (const auto& row : X)
            out.push_back(predict(row));
        return out;
    }
};

namespace detail
{
[[nodiscard]] inline double gini(const std::array<int64_t, 2>& counts) noexcept
{
    const auto total = static_cast<double>(counts[0] + counts[1]);
    if (total == 0.0)
        return 0.0;
    const auto p0 = static_cast<double>(counts[0]) / total;
    const auto p1 = static_cast<double>(counts[1]) / total;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitCandidate
{
    double gain = -1.0;
    size_t feature = 0;
    double threshold = 0.0;

    /// Evaluation-order-independent preference: larger gain, then lower
    /// feature index, then smaller threshold.
    [[nodiscard]] bool better_than(const SplitCandidate& other) const noexcept
    {
        if (gain != other.gain)
            return gain > other.gain;
        if (feature != other.feature)
            return feature < other.feature;
        return threshold < other.threshold;
    }
};

class TreeBuilder
{
public:
    TreeBuilder(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
        const ForestConfig& config, uint64_t tree_index, std::vector<double>& gini_decrease)
      : X_{X},
        y_{y},
        config_{config},
        feature_rng_{derive_rng(config.seed + tree_index, rng_stream::feature_sample)},
        gini_decrease_{gini_decrease}
    {}

    [[nodiscard]] DecisionTree build(std::vector<size_t> rows)
    {
        root_size_ = static_cast<double>(rows.size());
        tree_.nodes.clear();
        build_node(std::move(rows), 0);
        return std::move(tree_);
    }

private:
    uint32_t build_node(std::vector<size_t> rows, size_t depth)
    {
        const auto index = static_cast<uint32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        std::array<int64_t, 2> counts{};
        for (const auto row : rows)
            ++counts[static_cast<size_t>(y_[row])];
        tree_.nodes[index].class_counts = counts;

        const bool pure = counts[0] == 0 || counts[1] == 0;
        if (pure || rows.size() < config_.min_samples_split || depth >= config_.max_depth)
            return index;

        const auto best = find_best_split(rows, counts);
        if (best.gain <= 0.0)
            return index;

        std::vector<size_t> left_rows;
        std::vector<size_t> right_rows;
        for (const auto row : rows)
            (X_[row][best.feature] <= best.threshold ? left_rows : right_rows).push_back(row);
        rows.clear();
        rows.shrink_to_fit();

        gini_decrease_[best.feature] +=
            (static_cast<double>(left_rows.size() + right_rows.size()) / root_size_) * best.gain;

        tree_.nodes[index].split_feature = static_cast<int32_t>(best.feature);
        tree_.nodes[index].threshold = best.threshold;
        const auto left = build_node(std::move(left_rows), depth + 1);
        tree_.nodes[index].left = left;
        const auto right = build_node(std::move(right_rows), depth + 1);
        tree_.nodes[index].right = right;
        return index;
    }

    [[nodiscard]] SplitCandidate find_best_split(
        const std::vector<size_t>& rows, const std::array<int64_t, 2>& counts)
    {
        const auto d = X_[0].size();
        auto k = config_.features_per_split;
        if (k == 0)
            k = static_cast<size_t>(std::floor(std::sqrt(static_cast<double>(d))));
        k = std::max<size_t>(1, std::min(k, d));
        const auto candidates = sample_without_replacement(d, k, feature_rng_);

        const auto parent_gini = gini(counts);
        const auto n = static_cast<double>(rows.size());
        SplitCandidate best;

        std::vector<std::pair<double, int>> ordered(rows.size());
        for (const auto feature : candidates)
        {
            for (size_t i = 0; i < rows.size(); ++i)
                ordered[i] = {X_[rows[i]][feature], y_[rows[i]]};
            std::sort(ordered.begin(), ordered.end());
            if (ordered.front().first == ordered.back().first)
                continue;  // constant at this node

            std::array<int64_t, 2> left{};
            for (size_t i = 0; i + 1 < ordered.size(); ++i)
            {
                ++left[static_cast<size_t>(ordered[i].second)];
                if (ordered[i].first == ordered[i + 1].first)
                    continue;  // not a boundary between distinct values
                const std::array<int64_t, 2> right{
                    counts[0] - left[0], counts[1] - left[1]};
                const auto n_left = static_cast<double>(left[0] + left[1]);
                const auto n_right = n - n_left;
                const auto gain = parent_gini - (n_left / n) * gini(left) -
                                  (n_right / n) * gini(right);
                const SplitCandidate candidate{gain, feature, ordered[i].first};
                if (candidate.gain > 0.0 && candidate.better_than(best))
                    best = candidate;
            }
        }
        return best;
    }

    const std::vector<std::vector<double>>& X_;
    const std::vector<int>& y_;
    const ForestConfig& config_;
    SplitMix64 feature_rng_;
    std::vector<double>& gini_decrease_;
    DecisionTree tree_;
    double root_size_ = 0.0;
};
}  // namespace detail

/// Fits a random forest. Every tree t trains on its own bootstrap sample
/// (n rows drawn with replacement from a generator derived from seed + t)
/// and samples its split candidates without replacement per node, so the
/// result is bit-identical for a given (data, config) regardless of how the
/// per-tree work is scheduled. Single-class training data yields a constant
/// forest of pure leaves.
[[nodiscard]] inline RandomForestModel fit_random_forest(
    const std::vector<std::vector<double>>& X, const std::vector<int>& y,
    const ForestConfig& config = {})
{
    const auto n = X.size();
    if (n < 2)
        throw InsufficientDataError{"forest requires at least 2 rows"};
    if (y.size() != n)
        throw ShapeError{"X and y row counts differ"};
    if (config.n_trees == 0)
        throw InvalidDataError{"n_trees must be positive"};
    const auto d = X[0].size();
    for (const auto& row : X)
        if (row.size() != d)
            throw ShapeError{"ragged design matrix"};

    RandomForestModel model;
    model.config = config;
    model.trees.resize(config.n_trees);
    std::vector<std::vector<double>> per_tree_decrease(
        config.n_trees, std::vector<double>(d, 0.0));

    for (size_t t = 0; t < config.n_trees; ++t)
    {
        std::vector<size_t> rows(n);
        if (config.bootstrap)
        {
            auto bootstrap_rng = derive_rng(config.seed + t, rng_stream::bootstrap);
            for (auto& row : rows)
                row = bootstrap_rng.next_below(n);
        }
        else
        {
            for (size_t i = 0; i < n; ++i)
                rows[i] = i;
        }
        detail::TreeBuilder builder{X, y, config, t, per_tree_decrease[t]};
        model.trees[t] = builder.build(std::move(rows));
    }

    // Mean decrease in Gini: normalize each tree's decrease vector, average
    // across trees, renormalize. Trees that never split contribute nothing.
    model.importances.assign(d, 0.0);
    for (const auto& decrease : per_tree_decrease)
    {
        double total = 0.0;
        for (const auto value : decrease)
            total += value;
        if (total <= 0.0)
            continue;
        for (size_t j = 0; j < d; ++j)
            model.importances[j] += decrease[j] / total;
    }
    double total = 0.0;
    for (const auto value : model.importances)
        total += value;
    if (total > 0.0)
        for (auto& value : model.importances)
            value /= total;
    return model;
}

/// Convenience overload with explicit scalar hyperparameters.
[[nodiscard]] inline RandomForestModel fit_random_forest(
    const std::vector<std::vector<double>>& X, const std::vector<int>& y, size_t n_trees,
    size_t features_per_split, uint64_t seed)
{
    ForestConfig config;
    config.n_trees = n_trees;
    config.features_per_split = features_per_split;
    config.seed = seed;
    return fit_random_forest(X, y, config);
}
}  // namespace evmtriage

// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/elastic_net.hpp>
#include <evmtriage/error.hpp>
#include <evmtriage/features.hpp>
#include <evmtriage/logistic.hpp>
#include <evmtriage/metrics.hpp>
#include <evmtriage/random_forest.hpp>
#include <evmtriage/sampling.hpp>
#include <evmtriage/standardize.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace evmtriage
{
enum class ModelFamily
{
    forest,
    logistic,
    elastic_net,
};

[[nodiscard]] constexpr std::string_view to_string(ModelFamily family) noexcept
{
    switch (family)
    {
    case ModelFamily::forest:
        return "forest";
    case ModelFamily::logistic:
        return "logistic";
    default:
        return "elastic_net";
    }
}

[[nodiscard]] inline ModelFamily parse_model_family(std::string_view text)
{
    if (text == "forest")
        return ModelFamily::forest;
    if (text == "logistic")
        return ModelFamily::logistic;
    if (text == "elastic_net")
        return ModelFamily::elastic_net;
    throw MalformedInputError{"unknown model family: " + std::string{text}};
}

/// Configuration of one repeated-undersampling experiment.
struct ExperimentConfig
{
    ModelFamily model_family = ModelFamily::forest;
    std::vector<std::string> feature_subset;  ///< empty means all features
    size_t iterations = 100;
    double train_fraction = 0.7;
    uint64_t base_seed = 0;

    // Model hyperparameters.
    size_t n_trees = 100;
    size_t features_per_split = 0;  ///< 0 means ⌊√d⌋
    double en_alpha = 0.001;
    double en_lambda = 1.0;
    size_t logistic_max_iter = 1000;

    /// Worker threads for the iteration loop; 0 means hardware concurrency.
    /// Results are identical for any thread count.
    size_t threads = 0;
};

struct IterationResult
{
    Metrics metrics;
    std::vector<double> importances;  ///< aligned to the experiment's features
};

/// Aggregated outcome of one experiment. Importances for the forest are Gini
/// importances; for the linear families they are signed mean coefficients on
/// standardized features, and rankings always use the magnitude.
struct EvalReport
{
    ExperimentConfig config;
    std::vector<std::string> features;  ///< columns the experiment ran on
    std::vector<IterationResult> per_iteration;
    Metrics mean_metrics;
    std::vector<double> mean_importances;

    /// Features ranked by mean-importance magnitude (descending), ties broken
    /// lexicographically by mnemonic.
    [[nodiscard]] std::vector<std::pair<std::string, double>> ranked_importances() const
    {
        std::vector<std::pair<std::string, double>> ranked;
        ranked.reserve(features.size());
        for (size_t j = 0; j < features.size(); ++j)
            ranked.emplace_back(features[j], mean_importances[j]);
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            const auto magnitude_a = std::abs(a.second);
            const auto magnitude_b = std::abs(b.second);
            if (magnitude_a != magnitude_b)
                return magnitude_a > magnitude_b;
            return a.first < b.first;
        });
        return ranked;
    }

    /// The top-k ranked feature names (clamped to the available count).
    [[nodiscard]] std::vector<std::string> top_features(size_t k) const
    {
        auto ranked = ranked_importances();
        if (ranked.size() > k)
            ranked.resize(k);
        std::vector<std::string> names;
        names.reserve(ranked.size());
        for (auto& [name, value] : ranked)
            names.push_back(std::move(name));
        return names;
    }
};

namespace detail
{
[[nodiscard]] inline std::vector<int> labels_as_ints(const std::vector<Label>& labels)
{
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto label : labels)
        out.push_back(static_cast<int>(label));
    return out;
}

[[nodiscard]] inline std::vector<Label> ints_as_labels(const std::vector<int>& values)
{
    std::vector<Label> out;
    out.reserve(values.size());
    for (const auto value : values)
        out.push_back(value == 1 ? Label::violation : Label::legitimate);
    return out;
}

/// Expands coefficients on retained standardized columns back to the full
/// column set, zero-filling dropped (constant) columns.
[[nodiscard]] inline std::vector<double> expand_coefficients(
    const std::vector<double>& coefficients, const Standardization& standardization,
    size_t column_count)
{
    std::vector<double> expanded(column_count, 0.0);
    for (size_t i = 0; i < standardization.retained_columns.size(); ++i)
        expanded[standardization.retained_columns[i]] = coefficients[i];
    return expanded;
}

/// One undersample→split→fit→evaluate pass.
[[nodiscard]] inline IterationResult run_iteration(
    const FeatureMatrix& matrix, const ExperimentConfig& config, uint64_t seed)
{
    const auto balanced = undersample(matrix, seed);
    auto [train, test] = split(balanced, config.train_fraction, seed);

    IterationResult result;
    if (config.model_family == ModelFamily::forest)
    {
        ForestConfig forest_config;
        forest_config.n_trees = config.n_trees;
        forest_config.features_per_split = config.features_per_split;
        forest_config.seed = seed;
        const auto model =
            fit_random_forest(train.to_real_rows(), labels_as_ints(train.labels), forest_config);
        result.metrics =
            weighted_metrics(test.labels, ints_as_labels(model.predict(test.to_real_rows())));
        result.importances = model.importances;
        return result;
    }

    // Linear families fit on standardized inputs: the scaler is fitted on the
    // train split only and applied unchanged to the test split.
    const auto standardization = fit_standardization(train);
    const auto X_train = standardization.apply(train);
    const auto X_test = standardization.apply(test);

    std::vector<int> predictions;
    predictions.reserve(X_test.size());
    if (config.model_family == ModelFamily::logistic)
    {
        const auto model =
            fit_logistic(X_train, labels_as_ints(train.labels), config.logistic_max_iter);
        for (const auto& row : X_test)
            predictions.push_back(model.predict_proba(row) >= 0.5 ? 1 : 0);
        result.importances =
            expand_coefficients(model.weights, standardization, train.column_count());
    }
    else
    {
        std::vector<double> targets;
        targets.reserve(train.labels.size());
        for (const auto label : train.labels)
            targets.push_back(label == Label::violation ? 1.0 : 0.0);
        const auto model = fit_elastic_net(X_train, targets, config.en_alpha, config.en_lambda);
        for (const auto& row : X_test)
            predictions.push_back(model.predict_score(row) >= 0.5 ? 1 : 0);
        result.importances =
            expand_coefficients(model.coefficients, standardization, train.column_count());
    }
    result.metrics = weighted_metrics(test.labels, ints_as_labels(predictions));
    return result;
}
}  // namespace detail

/// Runs the repeated-undersampling experiment: for iteration i, undersample
/// and split with seed base_seed+i, fit the configured model, evaluate on the
/// test split, then average metrics and importances across iterations.
/// Iterations run on a worker pool but are assembled in index order, so the
/// report is bit-identical for any thread count. Errors raised inside an
/// iteration are rethrown with the iteration index attached.
[[nodiscard]] inline EvalReport run_experiment(
    const FeatureMatrix& matrix, const ExperimentConfig& config)
{
    if (config.iterations < 1)
        throw InvalidDataError{"iterations must be at least 1"};
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw InvalidDataError{"train_fraction must lie in (0, 1)"};

    EvalReport report;
    report.config = config;

    const auto working =
        config.feature_subset.empty() ? matrix : matrix.select_columns(config.feature_subset);
    report.features = working.schema.mnemonics();
    report.per_iteration.resize(config.iterations);

    auto thread_count = config.threads != 0 ?
                            config.threads :
                            std::max<size_t>(1, std::thread::hardware_concurrency());
    thread_count = std::min(thread_count, config.iterations);

    std::vector<std::exception_ptr> failures(config.iterations);
    std::atomic<size_t> next_iteration{0};
    const auto worker = [&]() {
        while (true)
        {
            const auto i = next_iteration.fetch_add(1);
            if (i >= config.iterations)
                return;
            try
            {
                report.per_iteration[i] =
                    detail::run_iteration(working, config, config.base_seed + i);
            }
            catch (...)
            {
                failures[i] = std::current_exception();
            }
        }
    };
    if (thread_count == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (size_t t = 0; t < thread_count; ++t)
            pool.emplace_back(worker);
        for (auto& thread : pool)
            thread.join();
    }
    for (size_t i = 0; i < failures.size(); ++i)
    {
        if (!failures[i])
            continue;
        try
        {
            std::rethrow_exception(failures[i]);
        }
        catch (const std::exception& e)
        {
            throw Error{"iteration " + std::to_string(i) + ": " + e.what()};
        }
    }

    const auto iterations_real = static_cast<double>(config.iterations);
    report.mean_importances.assign(report.features.size(), 0.0);
    for (const auto& iteration : report.per_iteration)
    {
        report.mean_metrics.accuracy += iteration.metrics.accuracy;
        report.mean_metrics.weighted_precision += iteration.metrics.weighted_precision;
        report.mean_metrics.weighted_recall += iteration.metrics.weighted_recall;
        report.mean_metrics.weighted_f1 += iteration.metrics.weighted_f1;
        for (size_t j = 0; j < report.mean_importances.size(); ++j)
            report.mean_importances[j] += iteration.importances[j];
    }
    report.mean_metrics.accuracy /= iterations_real;
    report.mean_metrics.weighted_precision /= iterations_real;
    report.mean_metrics.weighted_recall /= iterations_real;
    report.mean_metrics.weighted_f1 /= iterations_real;
    for (auto& importance : report.mean_importances)
        importance /= iterations_real;
    return report;
}

/// Fits the elastic net once on the full standardized corpus — the feature-
/// exploration step — and returns signed coefficients aligned to the schema
/// (zero for dropped constant columns).
[[nodiscard]] inline std::vector<double> elastic_net_exploration(
    const FeatureMatrix& matrix, double alpha, double lambda)
{
    const auto standardization = fit_standardization(matrix);
    std::vector<double> targets;
    targets.reserve(matrix.labels.size());
    for (const auto label : matrix.labels)
        targets.push_back(label == Label::violation ? 1.0 : 0.0);
    const auto model = fit_elastic_net(standardization.apply(matrix), targets, alpha, lambda);
    return detail::expand_coefficients(model.coefficients, standardization,
        matrix.column_count());
}

namespace detail
{
/// Feature names ranked by |value| descending, ties lexicographic.
[[nodiscard]] inline std::vector<std::string> rank_by_magnitude(
    const std::vector<std::string>& names, const std::vector<double>& values)
{
    std::vector<size_t> order(names.size());
    for (size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const auto magnitude_a = std::abs(values[a]);
        const auto magnitude_b = std::abs(values[b]);
        if (magnitude_a != magnitude_b)
            return magnitude_a > magnitude_b;
        return names[a] < names[b];
    });
    std::vector<std::string> ranked;
    ranked.reserve(names.size());
    for (const auto index : order)
        ranked.push_back(names[index]);
    return ranked;
}

[[nodiscard]] inline std::vector<std::string> take(std::vector<std::string> names, size_t k)
{
    if (names.size() > k)
        names.resize(k);
    return names;
}
}  // namespace detail

struct LadderRung
{
    std::string name;         ///< e.g. "RF2"
    std::string description;  ///< e.g. "top 10 features of RF1"
    EvalReport report;
};

/// Runs the full model ladder for a family.
///
/// Forest: RF1 all features; RF2/RF3/RF4 the top 10/3/1 of RF1 by mean
/// importance; RF5 the elastic-net-selected (non-zero coefficient) subset;
/// RF6/RF7/RF8 the top 10/3/1 of RF5; RF9 the elastic-net top 10 by
/// coefficient magnitude. Logistic: LR1 all; LR2/LR3 top 10/8 of LR1; LR4
/// elastic-net-selected; LR5/LR6 top 10/9 of LR4; LR7 elastic-net top 10.
/// Subset sizes clamp to the available feature count.
[[nodiscard]] inline std::vector<LadderRung> ladder(
    const FeatureMatrix& matrix, ModelFamily family, const ExperimentConfig& base = {})
{
    if (family == ModelFamily::elastic_net)
        throw InvalidDataError{"the ladder is defined for the forest and logistic families"};

    auto config = base;
    config.model_family = family;

    const auto run = [&](std::vector<std::string> subset) {
        auto rung_config = config;
        rung_config.feature_subset = std::move(subset);
        return run_experiment(matrix, rung_config);
    };

    // Elastic-net selection happens once, on the full corpus.
    const auto coefficients =
        elastic_net_exploration(matrix, config.en_alpha, config.en_lambda);
    std::vector<std::string> en_selected;
    std::vector<double> en_values;
    for (size_t j = 0; j < coefficients.size(); ++j)
        if (coefficients[j] != 0.0)
        {
            en_selected.push_back(matrix.schema.mnemonic(j));
            en_values.push_back(coefficients[j]);
        }
    if (en_selected.empty())
        throw InvalidDataError{"elastic net selected no features; lower lambda"};
    const auto en_top10 = detail::take(detail::rank_by_magnitude(en_selected, en_values), 10);

    std::vector<LadderRung> rungs;
    const char* prefix = family == ModelFamily::forest ? "RF" : "LR";
    const auto add = [&](int number, std::string description, EvalReport report) {
        rungs.push_back(
            {prefix + std::to_string(number), std::move(description), std::move(report)});
    };

    auto full = run({});
    auto selected = run(en_selected);
    if (family == ModelFamily::forest)
    {
        add(2, "top 10 features of RF1", run(full.top_features(10)));
        add(3, "top 3 features of RF1", run(full.top_features(3)));
        add(4, "top feature of RF1", run(full.top_features(1)));
        add(6, "top 10 features of RF5", run(selected.top_features(10)));
        add(7, "top 3 features of RF5", run(selected.top_features(3)));
        add(8, "top feature of RF5", run(selected.top_features(1)));
        add(9, "elastic-net top 10 features", run(en_top10));
        rungs.insert(rungs.begin() + 3,
            {"RF5", "elastic-net-selected features", std::move(selected)});
        rungs.insert(rungs.begin(), {"RF1", "all features", std::move(full)});
    }
    else
    {
        add(2, "top 10 features of LR1", run(full.top_features(10)));
        add(3, "top 8 features of LR1", run(full.top_features(8)));
        add(5, "top 10 features of LR4", run(selected.top_features(10)));
        add(6, "top 9 features of LR4", run(selected.top_features(9)));
        add(7, "elastic-net top 10 features", run(en_top10));
        rungs.insert(rungs.begin() + 2,
            {"LR4", "elastic-net-selected features", std::move(selected)});
        rungs.insert(rungs.begin(), {"LR1", "all features", std::move(full)});
    }
    return rungs;
}
}  // namespace evmtriage

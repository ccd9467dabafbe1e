// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmtriage/experiment.hpp>
#include <evmtriage/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace evmtriage;

namespace
{
/// Two-class matrix whose first column separates the classes (violations sit
/// high, legitimates low) and whose remaining columns are noise.
FeatureMatrix make_matrix(size_t violations, size_t legitimates, size_t d, uint64_t seed)
{
    SplitMix64 rng{seed};
    FeatureMatrix matrix;
    std::vector<std::string> names;
    for (size_t j = 0; j < d; ++j)
        names.push_back("F" + std::string(1, static_cast<char>('A' + j)));
    matrix.schema = FeatureSchema{names};
    for (size_t i = 0; i < violations + legitimates; ++i)
    {
        const bool violation = i < violations;
        FeatureVector row;
        row.contract = "0x" + std::to_string(i);
        row.counts.push_back(static_cast<int64_t>(
            violation ? 6 + rng.next_below(4) : rng.next_below(4)));
        for (size_t j = 1; j < d; ++j)
            row.counts.push_back(static_cast<int64_t>(rng.next_below(6)));
        matrix.rows.push_back(std::move(row));
        matrix.labels.push_back(violation ? Label::violation : Label::legitimate);
    }
    return matrix;
}

ExperimentConfig fast_config(ModelFamily family)
{
    ExperimentConfig config;
    config.model_family = family;
    config.iterations = 3;
    config.n_trees = 5;
    config.logistic_max_iter = 200;
    config.threads = 1;
    return config;
}

void expect_metrics_eq(const Metrics& a, const Metrics& b)
{
    EXPECT_EQ(a.accuracy, b.accuracy);  // bitwise on purpose
    EXPECT_EQ(a.weighted_precision, b.weighted_precision);
    EXPECT_EQ(a.weighted_recall, b.weighted_recall);
    EXPECT_EQ(a.weighted_f1, b.weighted_f1);
}
}  // namespace

TEST(Experiment, SingleForestIterationMatchesManualComposition)
{
    const auto matrix = make_matrix(15, 40, 4, 1);
    auto config = fast_config(ModelFamily::forest);
    config.iterations = 1;
    config.base_seed = 42;
    const auto report = run_experiment(matrix, config);

    const auto balanced = undersample(matrix, 42);
    const auto parts = split(balanced, 0.7, 42);
    ForestConfig forest_config;
    forest_config.n_trees = 5;
    forest_config.seed = 42;
    const auto model = fit_random_forest(
        parts.train.to_real_rows(), detail::labels_as_ints(parts.train.labels), forest_config);
    const auto metrics = weighted_metrics(
        parts.test.labels, detail::ints_as_labels(model.predict(parts.test.to_real_rows())));

    ASSERT_EQ(report.per_iteration.size(), 1u);
    expect_metrics_eq(report.per_iteration[0].metrics, metrics);
    expect_metrics_eq(report.mean_metrics, metrics);
    EXPECT_EQ(report.per_iteration[0].importances, model.importances);
    EXPECT_EQ(report.mean_importances, model.importances);
}

TEST(Experiment, SingleLogisticIterationMatchesManualComposition)
{
    const auto matrix = make_matrix(15, 40, 4, 2);
    auto config = fast_config(ModelFamily::logistic);
    config.iterations = 1;
    config.base_seed = 9;
    const auto report = run_experiment(matrix, config);

    const auto balanced = undersample(matrix, 9);
    const auto parts = split(balanced, 0.7, 9);
    const auto standardization = fit_standardization(parts.train);
    const auto model = fit_logistic(
        standardization.apply(parts.train), detail::labels_as_ints(parts.train.labels), 200);
    std::vector<int> predictions;
    for (const auto& row : standardization.apply(parts.test))
        predictions.push_back(model.predict_proba(row) >= 0.5 ? 1 : 0);
    const auto metrics =
        weighted_metrics(parts.test.labels, detail::ints_as_labels(predictions));

    expect_metrics_eq(report.per_iteration[0].metrics, metrics);
    EXPECT_EQ(report.per_iteration[0].importances,
        detail::expand_coefficients(model.weights, standardization, matrix.column_count()));
}

TEST(Experiment, ReportIsIdenticalForAnyThreadCount)
{
    const auto matrix = make_matrix(12, 30, 4, 3);
    auto config = fast_config(ModelFamily::forest);
    config.iterations = 6;

    config.threads = 1;
    const auto serial = run_experiment(matrix, config);
    config.threads = 4;
    const auto parallel = run_experiment(matrix, config);

    ASSERT_EQ(serial.per_iteration.size(), parallel.per_iteration.size());
    for (size_t i = 0; i < serial.per_iteration.size(); ++i)
    {
        expect_metrics_eq(serial.per_iteration[i].metrics, parallel.per_iteration[i].metrics);
        EXPECT_EQ(serial.per_iteration[i].importances, parallel.per_iteration[i].importances);
    }
    expect_metrics_eq(serial.mean_metrics, parallel.mean_metrics);
    EXPECT_EQ(serial.mean_importances, parallel.mean_importances);
}

TEST(Experiment, MeanMetricsAreTheArithmeticMean)
{
    const auto matrix = make_matrix(10, 25, 3, 4);
    auto config = fast_config(ModelFamily::forest);
    config.iterations = 5;
    const auto report = run_experiment(matrix, config);

    double f1 = 0.0;
    double accuracy = 0.0;
    for (const auto& iteration : report.per_iteration)
    {
        f1 += iteration.metrics.weighted_f1;
        accuracy += iteration.metrics.accuracy;
    }
    EXPECT_NEAR(report.mean_metrics.weighted_f1, f1 / 5.0, 1e-15);
    EXPECT_NEAR(report.mean_metrics.accuracy, accuracy / 5.0, 1e-15);
}

TEST(Experiment, ForestImportancesStayConvex)
{
    const auto matrix = make_matrix(10, 25, 4, 5);
    const auto report = run_experiment(matrix, fast_config(ModelFamily::forest));
    double total = 0.0;
    for (const auto value : report.mean_importances)
    {
        EXPECT_GE(value, 0.0);
        total += value;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Experiment, ElasticNetFamilyRunsEndToEnd)
{
    const auto matrix = make_matrix(10, 25, 3, 6);
    auto config = fast_config(ModelFamily::elastic_net);
    config.en_alpha = 0.001;
    config.en_lambda = 0.01;
    const auto report = run_experiment(matrix, config);
    EXPECT_GT(report.mean_metrics.accuracy, 0.0);
    EXPECT_LE(report.mean_metrics.weighted_f1, 1.0);
    EXPECT_EQ(report.mean_importances.size(), 3u);
}

TEST(Experiment, FeatureSubsetRestrictsAndReordersColumns)
{
    const auto matrix = make_matrix(10, 25, 4, 7);
    auto config = fast_config(ModelFamily::forest);
    config.feature_subset = {"FC", "FA"};
    const auto report = run_experiment(matrix, config);
    EXPECT_EQ(report.features, (std::vector<std::string>{"FC", "FA"}));
    EXPECT_EQ(report.mean_importances.size(), 2u);

    config.feature_subset = {"NOPE"};
    EXPECT_THROW(run_experiment(matrix, config), SchemaMismatchError);
}

TEST(Experiment, IterationErrorsCarryTheIterationIndex)
{
    // 2+2 rows at train fraction 0.25 → one-row train split can never hold
    // both classes, so the iteration fails with a stratification error that
    // the harness re-labels with its iteration index.
    const auto matrix = make_matrix(2, 2, 3, 8);
    auto config = fast_config(ModelFamily::forest);
    config.iterations = 1;
    config.train_fraction = 0.25;
    try
    {
        (void)run_experiment(matrix, config);
        FAIL() << "expected Error";
    }
    catch (const Error& e)
    {
        EXPECT_NE(std::string{e.what()}.find("iteration 0"), std::string::npos);
    }
}

TEST(Experiment, ValidatesConfig)
{
    const auto matrix = make_matrix(5, 10, 3, 9);
    auto config = fast_config(ModelFamily::forest);
    config.iterations = 0;
    EXPECT_THROW(run_experiment(matrix, config), InvalidDataError);
    config.iterations = 1;
    config.train_fraction = 1.0;
    EXPECT_THROW(run_experiment(matrix, config), InvalidDataError);
}

TEST(EvalReport, RankingIsByMagnitudeWithLexicographicTies)
{
    EvalReport report;
    report.features = {"MB", "MA", "MC", "MD"};
    report.mean_importances = {0.5, 0.5, -0.9, 0.1};
    const auto ranked = report.ranked_importances();
    ASSERT_EQ(ranked.size(), 4u);
    EXPECT_EQ(ranked[0].first, "MC");  // |−0.9| wins, sign ignored
    EXPECT_EQ(ranked[1].first, "MA");  // 0.5 tie → lexicographic
    EXPECT_EQ(ranked[2].first, "MB");
    EXPECT_EQ(ranked[3].first, "MD");

    EXPECT_EQ(report.top_features(2), (std::vector<std::string>{"MC", "MA"}));
    EXPECT_EQ(report.top_features(10).size(), 4u);  // clamped to what exists
}

TEST(Exploration, AlignsCoefficientsToSchemaZeroFillingDroppedColumns)
{
    // Column FB is constant, so standardization drops it; the exploration
    // vector must still have one (zero) entry per schema column.
    FeatureMatrix matrix;
    matrix.schema = FeatureSchema{{"FA", "FB", "FC"}};
    SplitMix64 rng{10};
    for (size_t i = 0; i < 40; ++i)
    {
        const bool violation = i < 20;
        FeatureVector row;
        row.contract = "0x" + std::to_string(i);
        row.counts = {static_cast<int64_t>(violation ? 5 + rng.next_below(3) : rng.next_below(3)),
            7, static_cast<int64_t>(rng.next_below(4))};
        matrix.rows.push_back(std::move(row));
        matrix.labels.push_back(violation ? Label::violation : Label::legitimate);
    }

    const auto coefficients = elastic_net_exploration(matrix, 0.001, 0.01);
    ASSERT_EQ(coefficients.size(), 3u);
    EXPECT_NE(coefficients[0], 0.0);  // informative column carries weight
    EXPECT_EQ(coefficients[1], 0.0);  // dropped constant column
}

TEST(Ladder, ForestRungNamesAndSubsetsAreConsistent)
{
    const auto matrix = make_matrix(12, 30, 5, 11);
    auto base = fast_config(ModelFamily::forest);
    base.iterations = 2;
    base.en_lambda = 0.01;
    const auto rungs = ladder(matrix, ModelFamily::forest, base);

    ASSERT_EQ(rungs.size(), 9u);
    for (size_t i = 0; i < 9; ++i)
        EXPECT_EQ(rungs[i].name, "RF" + std::to_string(i + 1));
    EXPECT_EQ(rungs[0].description, "all features");
    EXPECT_EQ(rungs[4].description, "elastic-net-selected features");

    // RF1 runs on every column; the derived rungs run on its ranked prefixes.
    EXPECT_EQ(rungs[0].report.features.size(), 5u);
    EXPECT_EQ(rungs[1].report.features, rungs[0].report.top_features(10));
    EXPECT_EQ(rungs[2].report.features, rungs[0].report.top_features(3));
    EXPECT_EQ(rungs[3].report.features, rungs[0].report.top_features(1));
    EXPECT_EQ(rungs[5].report.features, rungs[4].report.top_features(10));
    EXPECT_EQ(rungs[6].report.features, rungs[4].report.top_features(3));
    EXPECT_EQ(rungs[7].report.features, rungs[4].report.top_features(1));
    EXPECT_LE(rungs[8].report.features.size(), 10u);
}

TEST(Ladder, LogisticRungNames)
{
    const auto matrix = make_matrix(12, 30, 3, 12);
    auto base = fast_config(ModelFamily::logistic);
    base.iterations = 2;
    base.en_lambda = 0.01;
    const auto rungs = ladder(matrix, ModelFamily::logistic, base);

    ASSERT_EQ(rungs.size(), 7u);
    for (size_t i = 0; i < 7; ++i)
        EXPECT_EQ(rungs[i].name, "LR" + std::to_string(i + 1));
    EXPECT_EQ(rungs[0].description, "all features");
    EXPECT_EQ(rungs[1].description, "top 10 features of LR1");
    EXPECT_EQ(rungs[2].description, "top 8 features of LR1");
    EXPECT_EQ(rungs[3].description, "elastic-net-selected features");
    EXPECT_EQ(rungs[6].description, "elastic-net top 10 features");

    // Only 3 columns exist, so every "top k" clamps to at most 3.
    for (const auto& rung : rungs)
        EXPECT_LE(rung.report.features.size(), 3u);
}

TEST(Ladder, RejectsElasticNetFamily)
{
    const auto matrix = make_matrix(5, 10, 3, 13);
    EXPECT_THROW(ladder(matrix, ModelFamily::elastic_net), InvalidDataError);
}

TEST(ModelFamily, ParseAndToStringRoundTrip)
{
    for (const auto family :
        {ModelFamily::forest, ModelFamily::logistic, ModelFamily::elastic_net})
        EXPECT_EQ(parse_model_family(to_string(family)), family);
    EXPECT_THROW(parse_model_family("svm"), MalformedInputError);
}

// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmtriage/model_io.hpp>
#include <evmtriage/rng.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace evmtriage;

namespace
{
struct ModelIoTest : ::testing::Test
{
    std::filesystem::path dir;

    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = std::filesystem::temp_directory_path() /
              ("evmtriage_model_io_" + std::to_string(::getpid()) + "_" + info->name());
        std::filesystem::create_directories(dir);
    }

    void TearDown() override { std::filesystem::remove_all(dir); }

    [[nodiscard]] std::string path(const std::string& name) const
    {
        return (dir / name).string();
    }
};

std::pair<std::vector<std::vector<double>>, std::vector<int>> training_data(SplitMix64& rng)
{
    std::vector<std::vector<double>> X(30, std::vector<double>(4));
    std::vector<int> y(30);
    for (size_t i = 0; i < X.size(); ++i)
    {
        for (auto& cell : X[i])
            cell = rng.next_gaussian();
        y[i] = X[i][0] + 0.5 * rng.next_gaussian() > 0.0 ? 1 : 0;
    }
    y[0] = 0;
    y[1] = 1;
    return {std::move(X), std::move(y)};
}
}  // namespace

TEST_F(ModelIoTest, ElasticNetRoundTripIsBitExact)
{
    auto rng = SplitMix64{1};
    const auto [X, y] = training_data(rng);
    std::vector<double> targets(y.begin(), y.end());
    const auto model = fit_elastic_net(X, targets, 0.5, 0.01);

    const PersistedModel persisted{{"A", "B", "C", "D"}, model};
    save_model(path("en.json"), persisted);
    const auto loaded = load_model(path("en.json"));

    EXPECT_EQ(loaded.feature_names, persisted.feature_names);
    const auto& restored = std::get<ElasticNetModel>(loaded.model);
    EXPECT_EQ(restored.coefficients, model.coefficients);  // bitwise
    EXPECT_EQ(restored.intercept, model.intercept);
    EXPECT_EQ(restored.alpha, model.alpha);
    EXPECT_EQ(restored.lambda, model.lambda);
    EXPECT_EQ(restored.converged, model.converged);
    EXPECT_EQ(restored.sweeps_used, model.sweeps_used);
    for (const auto& row : X)
        EXPECT_EQ(restored.predict_score(row), model.predict_score(row));
}

TEST_F(ModelIoTest, LogisticRoundTripIsBitExact)
{
    auto rng = SplitMix64{2};
    const auto [X, y] = training_data(rng);
    const auto model = fit_logistic(X, y, 50);

    const PersistedModel persisted{{"W", "X", "Y", "Z"}, model};
    save_model(path("lr.json"), persisted);
    const auto loaded = load_model(path("lr.json"));

    const auto& restored = std::get<LogisticModel>(loaded.model);
    EXPECT_EQ(restored.weights, model.weights);
    EXPECT_EQ(restored.intercept, model.intercept);
    EXPECT_EQ(restored.converged, model.converged);
    EXPECT_EQ(restored.iterations_used, model.iterations_used);
    for (const auto& row : X)
        EXPECT_EQ(restored.predict_proba(row), model.predict_proba(row));
}

TEST_F(ModelIoTest, ForestRoundTripIsBitExact)
{
    auto rng = SplitMix64{3};
    const auto [X, y] = training_data(rng);
    const auto model = fit_random_forest(X, y, 7, 2, 11);

    const PersistedModel persisted{{"A", "B", "C", "D"}, model};
    save_model(path("rf.json"), persisted);
    const auto loaded = load_model(path("rf.json"));

    const auto& restored = std::get<RandomForestModel>(loaded.model);
    EXPECT_EQ(restored.importances, model.importances);
    EXPECT_EQ(restored.config.n_trees, model.config.n_trees);
    EXPECT_EQ(restored.config.seed, model.config.seed);
    EXPECT_EQ(restored.config.bootstrap, model.config.bootstrap);
    ASSERT_EQ(restored.trees.size(), model.trees.size());
    for (size_t t = 0; t < model.trees.size(); ++t)
    {
        ASSERT_EQ(restored.trees[t].nodes.size(), model.trees[t].nodes.size());
        for (size_t k = 0; k < model.trees[t].nodes.size(); ++k)
        {
            const auto& a = restored.trees[t].nodes[k];
            const auto& b = model.trees[t].nodes[k];
            EXPECT_EQ(a.split_feature, b.split_feature);
            EXPECT_EQ(a.threshold, b.threshold);
            EXPECT_EQ(a.left, b.left);
            EXPECT_EQ(a.right, b.right);
            EXPECT_EQ(a.class_counts, b.class_counts);
        }
    }
    for (const auto& row : X)
        EXPECT_EQ(restored.predict(row), model.predict(row));
}

TEST_F(ModelIoTest, NonIntegralThresholdSurvivesRoundTrip)
{
    // Shortest-round-trip double serialization must preserve awkward values.
    RandomForestModel model;
    DecisionTree tree;
    TreeNode split;
    split.split_feature = 0;
    split.threshold = 0.1 + 0.2;  // 0.30000000000000004
    split.left = 1;
    split.right = 2;
    tree.nodes.push_back(split);
    TreeNode leaf0;
    leaf0.class_counts = {3, 0};
    TreeNode leaf1;
    leaf1.class_counts = {0, 3};
    tree.nodes.push_back(leaf0);
    tree.nodes.push_back(leaf1);
    model.trees.push_back(tree);
    model.importances = {1.0};
    model.config.n_trees = 1;

    save_model(path("awkward.json"), {{"A"}, model});
    const auto loaded = load_model(path("awkward.json"));
    const auto& restored = std::get<RandomForestModel>(loaded.model);
    EXPECT_EQ(restored.trees[0].nodes[0].threshold, 0.1 + 0.2);
    EXPECT_EQ(restored.predict(std::vector<double>{0.30000000000000004}), 0);
}

TEST_F(ModelIoTest, RejectsWrongFormatVersionAndFamily)
{
    nlohmann::json doc;
    doc["format"] = "something-else";
    doc["version"] = 1;
    EXPECT_THROW(model_from_json(doc), MalformedInputError);

    doc["format"] = "evmtriage-model";
    doc["version"] = 99;
    EXPECT_THROW(model_from_json(doc), MalformedInputError);

    doc["version"] = 1;
    doc["features"] = nlohmann::json::array();
    doc["family"] = "perceptron";
    EXPECT_THROW(model_from_json(doc), MalformedInputError);
}

TEST_F(ModelIoTest, LoadErrorsAreTyped)
{
    EXPECT_THROW(load_model(path("missing.json")), IoError);

    std::ofstream bad{path("bad.json")};
    bad << "{ not json";
    bad.close();
    EXPECT_THROW(load_model(path("bad.json")), MalformedInputError);
}

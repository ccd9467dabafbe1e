// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/elastic_net.hpp>
#include <evmtriage/error.hpp>
#include <evmtriage/logistic.hpp>
#include <evmtriage/random_forest.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace evmtriage
{
/// A fitted model together with the feature names its columns refer to.
///
/// Persisted as versioned JSON (`{"format":"evmtriage-model","version":1,...}`).
/// Doubles are emitted in shortest round-trip form, so a loaded model
/// reproduces its predictions bit-exactly.
struct PersistedModel
{
    std::vector<std::string> feature_names;
    std::variant<ElasticNetModel, LogisticModel, RandomForestModel> model;
};

namespace detail
{
inline constexpr int kModelFormatVersion = 1;

inline void to_json_payload(nlohmann::json& doc, const ElasticNetModel& model)
{
    doc["family"] = "elastic_net";
    doc["alpha"] = model.alpha;
    doc["lambda"] = model.lambda;
    doc["intercept"] = model.intercept;
    doc["coefficients"] = model.coefficients;
    doc["converged"] = model.converged;
    doc["sweeps_used"] = model.sweeps_used;
}

inline void to_json_payload(nlohmann::json& doc, const LogisticModel& model)
{
    doc["family"] = "logistic";
    doc["intercept"] = model.intercept;
    doc["weights"] = model.weights;
    doc["converged"] = model.converged;
    doc["iterations_used"] = model.iterations_used;
}

inline void to_json_payload(nlohmann::json& doc, const RandomForestModel& model)
{
    doc["family"] = "forest";
    doc["n_trees"] = model.config.n_trees;
    doc["features_per_split"] = model.config.features_per_split;
    doc["seed"] = model.config.seed;
    doc["max_depth"] = model.config.max_depth;
    doc["min_samples_split"] = model.config.min_samples_split;
    doc["bootstrap"] = model.config.bootstrap;
    doc["importances"] = model.importances;
    auto& trees = doc["trees"] = nlohmann::json::array();
    for (const auto& tree : model.trees)
    {
        auto& nodes = trees.emplace_back(nlohmann::json::array());
        for (const auto& node : tree.nodes)
            nodes.push_back({{"f", node.split_feature}, {"t", node.threshold},
                {"l", node.left}, {"r", node.right},
                {"c", {node.class_counts[0], node.class_counts[1]}}});
    }
}

[[nodiscard]] inline ElasticNetModel elastic_net_from_json(const nlohmann::json& doc)
{
    ElasticNetModel model;
    model.alpha = doc.at("alpha").get<double>();
    model.lambda = doc.at("lambda").get<double>();
    model.intercept = doc.at("intercept").get<double>();
    model.coefficients = doc.at("coefficients").get<std::vector<double>>();
    model.converged = doc.at("converged").get<bool>();
    model.sweeps_used = doc.at("sweeps_used").get<size_t>();
    return model;
}

[[nodiscard]] inline LogisticModel logistic_from_json(const nlohmann::json& doc)
{
    LogisticModel model;
    model.intercept = doc.at("intercept").get<double>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.converged = doc.at("converged").get<bool>();
    model.iterations_used = doc.at("iterations_used").get<size_t>();
    return model;
}

[[nodiscard]] inline RandomForestModel forest_from_json(const nlohmann::json& doc)
{
    RandomForestModel model;
    model.config.n_trees = doc.at("n_trees").get<size_t>();
    model.config.features_per_split = doc.at("features_per_split").get<size_t>();
    model.config.seed = doc.at("seed").get<uint64_t>();
    model.config.max_depth = doc.at("max_depth").get<size_t>();
    model.config.min_samples_split = doc.at("min_samples_split").get<size_t>();
    model.config.bootstrap = doc.at("bootstrap").get<bool>();
    model.importances = doc.at("importances").get<std::vector<double>>();
    for (const auto& nodes : doc.at("trees"))
    {
        auto& tree = model.trees.emplace_back();
        for (const auto& entry : nodes)
        {
            TreeNode node;
            node.split_feature = entry.at("f").get<int32_t>();
            node.threshold = entry.at("t").get<double>();
            node.left = entry.at("l").get<uint32_t>();
            node.right = entry.at("r").get<uint32_t>();
            node.class_counts = {entry.at("c")[0].get<int64_t>(), entry.at("c")[1].get<int64_t>()};
            tree.nodes.push_back(node);
        }
    }
    return model;
}
}  // namespace detail

[[nodiscard]] inline nlohmann::json model_to_json(const PersistedModel& persisted)
{
    nlohmann::json doc;
    doc["format"] = "evmtriage-model";
    doc["version"] = detail::kModelFormatVersion;
    doc["features"] = persisted.feature_names;
    std::visit([&doc](const auto& model) { detail::to_json_payload(doc, model); },
        persisted.model);
    return doc;
}

[[nodiscard]] inline PersistedModel model_from_json(const nlohmann::json& doc)
{
    if (doc.value("format", "") != "evmtriage-model")
        throw MalformedInputError{"not an evmtriage model file"};
    if (doc.value("version", 0) != detail::kModelFormatVersion)
        throw MalformedInputError{"unsupported model format version"};
    PersistedModel persisted;
    persisted.feature_names = doc.at("features").get<std::vector<std::string>>();
    const auto family = doc.at("family").get<std::string>();
    if (family == "elastic_net")
        persisted.model = detail::elastic_net_from_json(doc);
    else if (family == "logistic")
        persisted.model = detail::logistic_from_json(doc);
    else if (family == "forest")
        persisted.model = detail::forest_from_json(doc);
    else
        throw MalformedInputError{"unknown model family: " + family};
    return persisted;
}

inline void save_model(const std::string& path, const PersistedModel& persisted)
{
    std::ofstream file{path, std::ios::binary};
    if (!file)
        throw IoError{"cannot write model file: " + path};
    file << model_to_json(persisted).dump(2) << '\n';
}

[[nodiscard]] inline PersistedModel load_model(const std::string& path)
{
    std::ifstream file{path, std::ios::binary};
    if (!file)
        throw IoError{"cannot open model file: " + path};
    nlohmann::json doc;
    try
    {
        file >> doc;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw MalformedInputError{std::string{"invalid model JSON: "} + e.what()};
    }
    return model_from_json(doc);
}
}  // namespace evmtriage

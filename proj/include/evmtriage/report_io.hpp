// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/experiment.hpp>
#include <evmtriage/stats.hpp>

#include <nlohmann/json.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace evmtriage
{
[[nodiscard]] inline nlohmann::json report_to_json(const EvalReport& report)
{
    nlohmann::json doc;
    doc["config"] = {{"model_family", std::string{to_string(report.config.model_family)}},
        {"iterations", report.config.iterations},
        {"train_fraction", report.config.train_fraction},
        {"base_seed", report.config.base_seed}, {"n_trees", report.config.n_trees},
        {"en_alpha", report.config.en_alpha}, {"en_lambda", report.config.en_lambda},
        {"feature_subset", report.config.feature_subset}};
    doc["features"] = report.features;
    doc["mean_metrics"] = {{"accuracy", report.mean_metrics.accuracy},
        {"weighted_precision", report.mean_metrics.weighted_precision},
        {"weighted_recall", report.mean_metrics.weighted_recall},
        {"weighted_f1", report.mean_metrics.weighted_f1}};
    auto& per_iteration = doc["per_iteration"] = nlohmann::json::array();
    for (const auto& iteration : report.per_iteration)
        per_iteration.push_back({{"accuracy", iteration.metrics.accuracy},
            {"weighted_precision", iteration.metrics.weighted_precision},
            {"weighted_recall", iteration.metrics.weighted_recall},
            {"weighted_f1", iteration.metrics.weighted_f1}});
    auto& ranked = doc["ranked_importances"] = nlohmann::json::array();
    for (const auto& [name, value] : report.ranked_importances())
        ranked.push_back({{"feature", name}, {"importance", value}});
    return doc;
}

[[nodiscard]] inline nlohmann::json ladder_to_json(const std::vector<LadderRung>& rungs)
{
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& rung : rungs)
    {
        auto entry = report_to_json(rung.report);
        entry["name"] = rung.name;
        entry["description"] = rung.description;
        doc.push_back(std::move(entry));
    }
    return doc;
}

[[nodiscard]] inline nlohmann::json mean_table_to_json(const std::vector<MeanComparison>& table)
{
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& row : table)
        doc.push_back({{"opcode", row.opcode}, {"violation_mean", row.mean_a},
            {"violation_sd", row.sd_a}, {"legitimate_mean", row.mean_b},
            {"legitimate_sd", row.sd_b}, {"t_value", row.t_value}, {"p_value", row.p_value},
            {"cohens_d", row.cohens_d}, {"ci_low", row.ci_low}, {"ci_high", row.ci_high}});
    return doc;
}

[[nodiscard]] inline nlohmann::json similarity_to_json(const SimilarityReport& report)
{
    const auto sample = [](const SimilaritySample& s) {
        return nlohmann::json{{"pairs", s.pair_count}, {"mean", s.mean}, {"sd", s.sd}};
    };
    nlohmann::json doc;
    doc["within_violation"] = sample(report.within_violation);
    doc["within_legitimate"] = sample(report.within_legitimate);
    doc["inter_class"] = sample(report.inter_class);
    doc["skipped_rows"] = report.skipped_rows;
    auto& comparisons = doc["comparisons"] = nlohmann::json::array();
    for (const auto& comparison : report.comparisons)
    {
        nlohmann::json entry{{"name", comparison.name}, {"defined", comparison.defined}};
        if (comparison.defined)
        {
            entry["t_value"] = comparison.t_value;
            entry["p_value"] = comparison.p_value;
        }
        comparisons.push_back(std::move(entry));
    }
    return doc;
}

namespace detail
{
[[nodiscard]] inline std::string fixed(double value, int precision)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << value;
    return out.str();
}

[[nodiscard]] inline std::string p_label(double p)
{
    return p < 0.001 ? std::string{"<0.001"} : fixed(p, 3);
}
}  // namespace detail

/// One aligned row per ladder rung: name, metrics, description.
inline void print_ladder_table(std::ostream& out, const std::vector<LadderRung>& rungs)
{
    out << std::left << std::setw(5) << "model" << std::right << std::setw(10) << "accuracy"
        << std::setw(11) << "precision" << std::setw(8) << "recall" << std::setw(9) << "f1"
        << "  description\n";
    for (const auto& rung : rungs)
    {
        const auto& m = rung.report.mean_metrics;
        out << std::left << std::setw(5) << rung.name << std::right << std::setw(10)
            << detail::fixed(m.accuracy, 3) << std::setw(11)
            << detail::fixed(m.weighted_precision, 3) << std::setw(8)
            << detail::fixed(m.weighted_recall, 3) << std::setw(9)
            << detail::fixed(m.weighted_f1, 3) << "  " << rung.description << '\n';
    }
}

/// Mean-comparison table: per-class mean (sd), t, p, d [CI].
inline void print_mean_table(std::ostream& out, const std::vector<MeanComparison>& table)
{
    out << std::left << std::setw(14) << "opcode" << std::right << std::setw(16)
        << "violation" << std::setw(18) << "legitimate" << std::setw(9) << "t"
        << std::setw(8) << "p" << std::setw(9) << "d"
        << "  95% CI\n";
    for (const auto& row : table)
    {
        out << std::left << std::setw(14) << row.opcode << std::right << std::setw(16)
            << detail::fixed(row.mean_a, 3) + " (" + detail::fixed(row.sd_a, 3) + ")"
            << std::setw(18)
            << detail::fixed(row.mean_b, 3) + " (" + detail::fixed(row.sd_b, 3) + ")"
            << std::setw(9) << detail::fixed(row.t_value, 3) << std::setw(8)
            << detail::p_label(row.p_value) << std::setw(9) << detail::fixed(row.cohens_d, 3)
            << "  [" << detail::fixed(row.ci_low, 3) << ", " << detail::fixed(row.ci_high, 3)
            << "]\n";
    }
}

inline void print_similarity(std::ostream& out, const SimilarityReport& report)
{
    const auto row = [&](const char* name, const SimilaritySample& sample) {
        out << std::left << std::setw(20) << name << std::right << std::setw(10)
            << sample.pair_count << std::setw(9) << detail::fixed(sample.mean, 3)
            << std::setw(9) << detail::fixed(sample.sd, 3) << '\n';
    };
    out << std::left << std::setw(20) << "pairing" << std::right << std::setw(10) << "pairs"
        << std::setw(9) << "mean" << std::setw(9) << "sd" << '\n';
    row("within violation", report.within_violation);
    row("within legitimate", report.within_legitimate);
    row("inter-class", report.inter_class);
    for (const auto& comparison : report.comparisons)
    {
        if (comparison.defined)
            out << comparison.name << ": t = " << detail::fixed(comparison.t_value, 3)
                << ", p = " << detail::p_label(comparison.p_value) << '\n';
        else
            out << comparison.name << ": not defined for this corpus\n";
    }
    if (report.skipped_rows > 0)
        out << "skipped zero-norm rows: " << report.skipped_rows << '\n';
}
}  // namespace evmtriage

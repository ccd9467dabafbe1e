// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0

/// Command-line front end wiring the pipeline end to end:
///
///   fetch        token lists → labeled corpus with bytecode
///   disassemble  bytecode → instruction listing
///   featurize    corpus → opcode-frequency feature CSV
///   explore      feature CSV → elastic-net coefficients
///   evaluate     feature CSV → repeated-undersampling model reports
///   stats        feature CSV → mean-comparison and similarity reports
///   report       feature CSV → aggregate of ladders, exploration, and stats
///
/// Every stochastic command honors --seed for bit-reproducible output.
/// Exit codes: 0 success, 1 user error, 2 environment (network/filesystem).

#include <evmtriage/evmtriage.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{
using namespace evmtriage;

constexpr int kExitSuccess = 0;
constexpr int kExitUserError = 1;
constexpr int kExitEnvironmentError = 2;

void write_text_output(const std::string& out_path, const std::string& text)
{
    if (out_path.empty())
    {
        std::cout << text;
        return;
    }
    std::ofstream file{out_path, std::ios::binary};
    if (!file)
        throw IoError{"cannot write output file: " + out_path};
    file << text;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    size_t begin = 0;
    while (begin <= text.size())
    {
        const auto comma = text.find(',', begin);
        const auto item = text.substr(
            begin, comma == std::string::npos ? std::string::npos : comma - begin);
        if (!item.empty())
            items.push_back(item);
        if (comma == std::string::npos)
            break;
        begin = comma + 1;
    }
    return items;
}

struct CommonOptions
{
    uint64_t seed = 0;
    size_t iterations = 100;
    std::string format = "table";
    std::string out;
};

int cmd_fetch(const std::string& violations_path, const std::string& legitimate_path,
    const FetchOptions& fetch_options, const std::string& out_path)
{
    auto violations = load_token_list(violations_path, Label::violation);
    std::vector<ContractRecord> legitimate;
    if (!legitimate_path.empty())
        legitimate = load_token_list(legitimate_path, Label::legitimate);
    auto corpus = merge_lists(violations, legitimate);

    const auto report = fetch_bytecode(corpus, fetch_options);
    save_corpus(out_path, corpus);

    std::cout << corpus.records.size() << " contracts (" << corpus.count(Label::violation)
              << " violations, " << corpus.overlap_count() << " overlaps relabeled)\n"
              << "bytecode: " << report.fetched << " fetched, " << report.from_cache
              << " cached, " << report.already_present << " already present, "
              << report.empty_code << " empty\n";
    if (!report.failures.empty())
    {
        std::cerr << report.failures.size() << " fetch failures:\n";
        for (const auto& failure : report.failures)
            std::cerr << "  " << failure.address << ": " << failure.message << '\n';
        return kExitEnvironmentError;
    }
    return kExitSuccess;
}

int cmd_disassemble(const std::string& input, const std::string& out_path)
{
    std::string hex;
    if (input.rfind("0x", 0) == 0)
        hex = input;
    else
    {
        std::ifstream file{input, std::ios::binary};
        if (!file)
            throw IoError{"cannot open bytecode file: " + input};
        hex.assign(std::istreambuf_iterator<char>{file}, std::istreambuf_iterator<char>{});
    }
    const auto instructions = disassemble(parse_hex(hex));
    std::string listing;
    for (const auto& instruction : instructions)
    {
        listing += format_instruction(instruction);
        listing += '\n';
    }
    write_text_output(out_path, listing);
    return kExitSuccess;
}

int cmd_featurize(const std::string& corpus_path, const std::string& out_path)
{
    const auto corpus = load_corpus(corpus_path);
    const auto result = featurize_corpus(corpus);
    write_feature_csv(out_path, result.matrix);
    std::cout << "wrote " << out_path << ": " << result.matrix.row_count() << " rows, "
              << result.matrix.column_count() << " features\n";
    for (const auto& address : result.skipped)
        std::cerr << "warning: no bytecode for " << address << ", row excluded\n";
    return kExitSuccess;
}

int cmd_explore(const std::string& features_path, double alpha, double lambda,
    const CommonOptions& common)
{
    const auto matrix = read_feature_csv(features_path);
    const auto coefficients = elastic_net_exploration(matrix, alpha, lambda);

    std::vector<std::string> selected;
    std::vector<double> values;
    for (size_t j = 0; j < coefficients.size(); ++j)
        if (coefficients[j] != 0.0)
        {
            selected.push_back(matrix.schema.mnemonic(j));
            values.push_back(coefficients[j]);
        }
    const auto ranked = detail::rank_by_magnitude(selected, values);

    if (common.format == "json")
    {
        nlohmann::json doc;
        doc["alpha"] = alpha;
        doc["lambda"] = lambda;
        doc["nonzero_count"] = selected.size();
        auto& entries = doc["coefficients"] = nlohmann::json::array();
        for (const auto& name : ranked)
            entries.push_back({{"feature", name},
                {"coefficient", coefficients[matrix.schema.index_of(name)]}});
        write_text_output(common.out, doc.dump(2) + "\n");
    }
    else
    {
        std::string text = std::to_string(selected.size()) + " of " +
                           std::to_string(matrix.column_count()) +
                           " features have non-zero coefficients\n";
        for (const auto& name : ranked)
            text += name + " " +
                    detail::fixed(coefficients[matrix.schema.index_of(name)], 6) + "\n";
        write_text_output(common.out, text);
    }
    return kExitSuccess;
}

int cmd_evaluate(const std::string& features_path, const std::string& family_name,
    bool run_ladder, const std::string& feature_list, double train_fraction,
    const CommonOptions& common)
{
    const auto matrix = read_feature_csv(features_path);
    const auto family = parse_model_family(family_name);

    ExperimentConfig config;
    config.model_family = family;
    config.iterations = common.iterations;
    config.train_fraction = train_fraction;
    config.base_seed = common.seed;

    if (run_ladder)
    {
        const auto rungs = ladder(matrix, family, config);
        if (common.format == "json")
            write_text_output(common.out, ladder_to_json(rungs).dump(2) + "\n");
        else
        {
            std::ostringstream text;
            print_ladder_table(text, rungs);
            write_text_output(common.out, text.str());
        }
        return kExitSuccess;
    }

    config.feature_subset = split_list(feature_list);
    const auto report = run_experiment(matrix, config);
    if (common.format == "json")
        write_text_output(common.out, report_to_json(report).dump(2) + "\n");
    else
    {
        std::ostringstream text;
        const auto& m = report.mean_metrics;
        text << "accuracy " << detail::fixed(m.accuracy, 3) << ", precision "
             << detail::fixed(m.weighted_precision, 3) << ", recall "
             << detail::fixed(m.weighted_recall, 3) << ", f1 "
             << detail::fixed(m.weighted_f1, 3) << " (" << report.config.iterations
             << " iterations, " << report.features.size() << " features)\n";
        size_t shown = 0;
        for (const auto& [name, value] : report.ranked_importances())
        {
            if (++shown > 10)
                break;
            text << "  " << name << " " << detail::fixed(value, 4) << '\n';
        }
        write_text_output(common.out, text.str());
    }
    return kExitSuccess;
}

int cmd_stats(const std::string& features_path, const std::string& opcode_list,
    const CommonOptions& common)
{
    const auto matrix = read_feature_csv(features_path);
    const auto opcodes = split_list(opcode_list);

    std::vector<MeanComparison> mean_table;
    if (!opcodes.empty())
        mean_table = opcode_mean_table(matrix, opcodes);
    const auto similarity = class_similarity(matrix);

    if (common.format == "json")
    {
        nlohmann::json doc;
        if (!mean_table.empty())
            doc["mean_comparisons"] = mean_table_to_json(mean_table);
        doc["similarity"] = similarity_to_json(similarity);
        write_text_output(common.out, doc.dump(2) + "\n");
    }
    else
    {
        std::ostringstream text;
        if (!mean_table.empty())
        {
            print_mean_table(text, mean_table);
            text << '\n';
        }
        print_similarity(text, similarity);
        write_text_output(common.out, text.str());
    }
    return kExitSuccess;
}

int cmd_report(const std::string& features_path, double train_fraction, double alpha,
    double lambda, const CommonOptions& common)
{
    const auto matrix = read_feature_csv(features_path);

    ExperimentConfig config;
    config.iterations = common.iterations;
    config.train_fraction = train_fraction;
    config.base_seed = common.seed;
    config.en_alpha = alpha;
    config.en_lambda = lambda;

    const auto forest_rungs = ladder(matrix, ModelFamily::forest, config);
    const auto logistic_rungs = ladder(matrix, ModelFamily::logistic, config);
    const auto mean_table =
        opcode_mean_table(matrix, forest_rungs.front().report.top_features(10));
    const auto similarity = class_similarity(matrix);
    const auto coefficients = elastic_net_exploration(matrix, alpha, lambda);

    size_t nonzero = 0;
    for (const auto value : coefficients)
        if (value != 0.0)
            ++nonzero;

    if (common.format == "json")
    {
        nlohmann::json doc;
        doc["forest_ladder"] = ladder_to_json(forest_rungs);
        doc["logistic_ladder"] = ladder_to_json(logistic_rungs);
        doc["mean_comparisons"] = mean_table_to_json(mean_table);
        doc["similarity"] = similarity_to_json(similarity);
        doc["elastic_net_nonzero"] = nonzero;
        write_text_output(common.out, doc.dump(2) + "\n");
    }
    else
    {
        std::ostringstream text;
        text << "=== forest ladder ===\n";
        print_ladder_table(text, forest_rungs);
        text << "\n=== logistic ladder ===\n";
        print_ladder_table(text, logistic_rungs);
        text << "\n=== opcode mean comparisons (forest top 10) ===\n";
        print_mean_table(text, mean_table);
        text << "\n=== cosine similarity ===\n";
        print_similarity(text, similarity);
        text << "\nelastic net: " << nonzero << " non-zero coefficients of "
             << matrix.column_count() << "\n";
        write_text_output(common.out, text.str());
    }
    return kExitSuccess;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"opcode-frequency triage models for ERC-20 token contracts"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");
    // Precedence (lowest to highest): config file, environment, flags —
    // CLI11's native resolution order.

    CommonOptions common;
    std::string endpoint;
    std::string cache_dir = "cache";
    app.add_option("--seed", common.seed, "base random seed")->capture_default_str();
    app.add_option("--iterations", common.iterations, "experiment iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    app.add_option("--out", common.out, "output path (default: stdout)");
    app.add_option("--endpoint", endpoint, "Ethereum JSON-RPC endpoint URL")
        ->envname("EVMTRIAGE_RPC_URL");
    app.add_option("--cache-dir", cache_dir, "bytecode cache directory")
        ->capture_default_str();

    auto* fetch = app.add_subcommand("fetch", "fetch bytecode for labeled token lists");
    std::string violations_path;
    std::string legitimate_path;
    std::string corpus_out = "corpus.json";
    size_t workers = 4;
    fetch->add_option("--violations", violations_path, "violation token list (CSV/JSON)")
        ->required();
    fetch->add_option("--legitimate", legitimate_path, "legitimate token list (CSV/JSON)");
    fetch->add_option("--corpus", corpus_out, "corpus output file")->capture_default_str();
    fetch->add_option("--workers", workers, "concurrent fetch workers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* disassemble_cmd =
        app.add_subcommand("disassemble", "print the instruction listing of bytecode");
    std::string disassemble_input;
    disassemble_cmd
        ->add_option("input", disassemble_input, "hex file path or literal 0x-prefixed bytecode")
        ->required();

    auto* featurize = app.add_subcommand("featurize", "build the feature CSV from a corpus");
    std::string corpus_path;
    std::string features_out = "features.csv";
    featurize->add_option("--corpus", corpus_path, "corpus file from fetch")->required();
    featurize->add_option("--features", features_out, "feature CSV output path")
        ->capture_default_str();

    double alpha = 0.001;
    double lambda = 1.0;
    auto* explore = app.add_subcommand("explore", "elastic-net feature exploration");
    std::string features_path;
    explore->add_option("--features", features_path, "feature CSV")->required();
    explore->add_option("--alpha", alpha, "elastic-net mixing parameter")
        ->capture_default_str();
    explore->add_option("--lambda", lambda, "elastic-net penalty strength")
        ->capture_default_str();

    auto* evaluate = app.add_subcommand("evaluate", "repeated-undersampling model evaluation");
    std::string family_name = "forest";
    std::string feature_list;
    double train_fraction = 0.7;
    bool run_ladder = false;
    std::string eval_features_path;
    evaluate->add_option("--features", eval_features_path, "feature CSV")->required();
    evaluate->add_option("--family", family_name, "model family")
        ->check(CLI::IsMember({"forest", "logistic", "elastic_net"}))
        ->capture_default_str();
    evaluate->add_flag("--ladder", run_ladder, "run the family's full model ladder");
    evaluate->add_option(
        "--subset", feature_list, "comma-separated feature subset (default: all)");
    evaluate->add_option("--train-fraction", train_fraction, "train split fraction")
        ->capture_default_str();

    auto* stats = app.add_subcommand("stats", "mean-comparison and similarity statistics");
    std::string stats_features_path;
    std::string opcode_list;
    stats->add_option("--features", stats_features_path, "feature CSV")->required();
    stats->add_option(
        "--opcodes", opcode_list, "comma-separated opcodes for the mean-comparison table");

    auto* report = app.add_subcommand("report", "aggregate ladders, exploration, and stats");
    std::string report_features_path;
    double report_train_fraction = 0.7;
    report->add_option("--features", report_features_path, "feature CSV")->required();
    report->add_option("--train-fraction", report_train_fraction, "train split fraction")
        ->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const auto code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUserError;
    }

    try
    {
        if (*fetch)
        {
            FetchOptions fetch_options;
            fetch_options.endpoint = endpoint;
            fetch_options.cache_dir = cache_dir;
            fetch_options.workers = workers;
            return cmd_fetch(violations_path, legitimate_path, fetch_options, corpus_out);
        }
        if (*disassemble_cmd)
            return cmd_disassemble(disassemble_input, common.out);
        if (*featurize)
            return cmd_featurize(corpus_path, features_out);
        if (*explore)
            return cmd_explore(features_path, alpha, lambda, common);
        if (*evaluate)
            return cmd_evaluate(eval_features_path, family_name, run_ladder, feature_list,
                train_fraction, common);
        if (*stats)
            return cmd_stats(stats_features_path, opcode_list, common);
        if (*report)
            return cmd_report(report_features_path, report_train_fraction, alpha, lambda, common);
        std::cerr << "no subcommand given\n";
        return kExitUserError;
    }
    catch (const IoError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEnvironmentError;
    }
    catch (const RpcError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEnvironmentError;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUserError;
    }
    catch (const std::exception& e)
    {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return kExitUserError;
    }
}

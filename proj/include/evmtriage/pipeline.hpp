// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/corpus.hpp>
#include <evmtriage/disassembler.hpp>
#include <evmtriage/features.hpp>

#include <map>
#include <string>
#include <vector>

namespace evmtriage
{
struct FeaturizeResult
{
    FeatureMatrix matrix;
    std::vector<std::string> skipped;  ///< addresses with no bytecode, in corpus order
};

/// Disassembles every fetched contract, builds the corpus-wide schema from
/// the opcodes that actually occur, and vectorizes each contract against it.
/// Records with no bytecode (never fetched) are excluded and listed;
/// empty-code contracts stay in as all-zero rows.
[[nodiscard]] inline FeaturizeResult featurize_corpus(const Corpus& corpus)
{
    FeaturizeResult result;
    std::vector<std::map<std::string, int64_t>> per_contract;
    std::vector<size_t> included;
    for (size_t i = 0; i < corpus.records.size(); ++i)
    {
        const auto& record = corpus.records[i];
        if (!record.bytecode.has_value())
        {
            result.skipped.push_back(record.address);
            continue;
        }
        per_contract.push_back(count_opcodes(disassemble(*record.bytecode)));
        included.push_back(i);
    }
    if (per_contract.empty())
        throw InsufficientDataError{"no contract in the corpus has bytecode"};

    result.matrix.schema = build_schema(per_contract);
    result.matrix.rows.reserve(included.size());
    result.matrix.labels.reserve(included.size());
    for (size_t k = 0; k < included.size(); ++k)
    {
        const auto& record = corpus.records[included[k]];
        result.matrix.rows.push_back(
            vectorize(per_contract[k], result.matrix.schema, record.address));
        result.matrix.labels.push_back(record.label);
    }
    return result;
}
}  // namespace evmtriage

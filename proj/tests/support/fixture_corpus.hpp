// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/corpus.hpp>
#include <evmtriage/features.hpp>
#include <evmtriage/hex.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

/// Access to the committed fixture corpus under data/: a synthetic feature
/// dataset (data/fixture_features.csv) of 47 violation and 2139 legitimate
/// ERC-20 token contracts, plus bytecode (data/contracts/<address>.hex) for
/// ten individually analyzed contracts whose key opcode counts are known.
namespace evmtriage::fixture
{
inline constexpr size_t kViolationCount = 47;
inline constexpr size_t kLegitimateCount = 2139;
inline constexpr size_t kFeatureCount = 142;

/// One of the ten contracts studied individually: five violating tokens and
/// five legitimate ones, with their expected disassembly counts for the three
/// headline opcodes.
struct NamedContract
{
    const char* name;
    const char* address;
    Label label;
    int64_t calldatasize;
    int64_t callvalue;
    int64_t lt;
};

[[nodiscard]] const std::array<NamedContract, 10>& named_contracts();

/// The data directory: the EVMTRIAGE_DATA_DIR environment variable when set,
/// otherwise the compiled-in default passed by the build.
[[nodiscard]] std::filesystem::path resolve_data_dir(const char* compiled_default);

/// The fixture feature CSV path: the EVMTRIAGE_DATASET environment variable
/// when set, otherwise fixture_features.csv inside the data directory.
[[nodiscard]] std::filesystem::path resolve_dataset_path(
    const std::filesystem::path& data_dir);

/// Loads and returns the fixture feature matrix.
[[nodiscard]] FeatureMatrix load_fixture_matrix(const std::filesystem::path& csv_path);

/// Loads one named contract's committed bytecode from data/contracts/.
[[nodiscard]] Bytecode load_contract_bytecode(
    const std::filesystem::path& data_dir, const std::string& address);

/// Builds a ten-record corpus from the named contracts' committed bytecode.
[[nodiscard]] Corpus load_named_corpus(const std::filesystem::path& data_dir);
}  // namespace evmtriage::fixture

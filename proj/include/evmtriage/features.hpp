// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/disassembler.hpp>
#include <evmtriage/error.hpp>
#include <evmtriage/label.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evmtriage
{
/// Canonical column order for feature matrices: a duplicate-free, sorted list
/// of the opcode mnemonics that occur in the corpus the schema was built from.
class FeatureSchema
{
public:
    FeatureSchema() = default;

    /// Constructs a schema from an already-sorted, duplicate-free mnemonic
    /// list (as produced by build_schema or read back from a CSV header).
    explicit FeatureSchema(std::vector<std::string> mnemonics)
      : mnemonics_{std::move(mnemonics)}
    {
        for (size_t i = 0; i < mnemonics_.size(); ++i)
        {
            if (!index_.emplace(mnemonics_[i], i).second)
                throw MalformedInputError{"duplicate mnemonic in schema: " + mnemonics_[i]};
        }
    }

    [[nodiscard]] size_t size() const noexcept { return mnemonics_.size(); }
    [[nodiscard]] const std::vector<std::string>& mnemonics() const noexcept
    {
        return mnemonics_;
    }
    [[nodiscard]] const std::string& mnemonic(size_t column) const { return mnemonics_.at(column); }

    /// Column index of a mnemonic, or npos when absent.
    static constexpr size_t npos = static_cast<size_t>(-1);
    [[nodiscard]] size_t index_of(std::string_view mnemonic) const noexcept
    {
        const auto it = index_.find(std::string{mnemonic});
        return it == index_.end() ? npos : it->second;
    }

    [[nodiscard]] bool operator==(const FeatureSchema& other) const noexcept
    {
        return mnemonics_ == other.mnemonics_;
    }

private:
    std::vector<std::string> mnemonics_;
    std::unordered_map<std::string, size_t> index_;
};

/// One contract's opcode counts aligned to a FeatureSchema. The counts sum to
/// the contract's decoded instruction count.
struct FeatureVector
{
    std::string contract;  ///< contract address
    std::vector<int64_t> counts;
};

/// The corpus feature matrix: one labeled count row per contract, all rows
/// sharing one schema.
struct FeatureMatrix
{
    FeatureSchema schema;
    std::vector<FeatureVector> rows;
    std::vector<Label> labels;

    [[nodiscard]] size_t row_count() const noexcept { return rows.size(); }
    [[nodiscard]] size_t column_count() const noexcept { return schema.size(); }

    [[nodiscard]] size_t count(Label label) const noexcept
    {
        return static_cast<size_t>(std::count(labels.begin(), labels.end(), label));
    }

    /// Rows as reals, for model fitting.
    [[nodiscard]] std::vector<std::vector<double>> to_real_rows() const
    {
        std::vector<std::vector<double>> result(rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            result[i].assign(rows[i].counts.begin(), rows[i].counts.end());
        return result;
    }

    /// One column as reals.
    [[nodiscard]] std::vector<double> column(size_t index) const
    {
        std::vector<double> values(rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            values[i] = static_cast<double>(rows[i].counts.at(index));
        return values;
    }

    /// A new matrix restricted to the named columns, in the order given.
    /// Unknown mnemonics raise a schema-mismatch error naming the offender.
    [[nodiscard]] FeatureMatrix select_columns(const std::vector<std::string>& mnemonics) const
    {
        std::vector<size_t> indices;
        indices.reserve(mnemonics.size());
        for (const auto& name : mnemonics)
        {
            const auto index = schema.index_of(name);
            if (index == FeatureSchema::npos)
                throw SchemaMismatchError{"schema mismatch: " + name};
            indices.push_back(index);
        }
        FeatureMatrix result;
        result.schema = FeatureSchema{mnemonics};
        result.labels = labels;
        result.rows.reserve(rows.size());
        for (const auto& row : rows)
        {
            FeatureVector selected;
            selected.contract = row.contract;
            selected.counts.reserve(indices.size());
            for (const auto index : indices)
                selected.counts.push_back(row.counts[index]);
            result.rows.push_back(std::move(selected));
        }
        return result;
    }

    /// A new matrix containing the given rows, in the order given.
    [[nodiscard]] FeatureMatrix select_rows(const std::vector<size_t>& indices) const
    {
        FeatureMatrix result;
        result.schema = schema;
        result.rows.reserve(indices.size());
        result.labels.reserve(indices.size());
        for (const auto index : indices)
        {
            result.rows.push_back(rows.at(index));
            result.labels.push_back(labels.at(index));
        }
        return result;
    }
};

/// Tallies how many times each opcode appears in a disassembly. Opcodes that
/// never appear are absent from the map; PUSH immediates contribute nothing
/// beyond the PUSH-N mnemonic itself.
[[nodiscard]] inline std::map<std::string, int64_t> count_opcodes(
    const std::vector<Instruction>& disassembly)
{
    std::map<std::string, int64_t> counts;
    for (const auto& instruction : disassembly)
        ++counts[std::string{instruction.mnemonic}];
    return counts;
}

/// Builds the canonical schema for a corpus: the sorted (lexicographic) union
/// of every mnemonic that appears in at least one count map. Requires at
/// least one count map; a single empty map yields an empty schema.
[[nodiscard]] inline FeatureSchema build_schema(
    const std::vector<std::map<std::string, int64_t>>& corpus_counts)
{
    if (corpus_counts.empty())
        throw InsufficientDataError{"build_schema requires at least one count map"};
    std::set<std::string> united;
    for (const auto& counts : corpus_counts)
        for (const auto& [mnemonic, count] : counts)
            united.insert(mnemonic);
    return FeatureSchema{std::vector<std::string>{united.begin(), united.end()}};
}

/// Aligns a count map to a schema: column i holds counts[schema[i]], absent
/// opcodes zero-filled. A count for an opcode outside the schema raises a
/// schema-mismatch error naming it.
[[nodiscard]] inline FeatureVector vectorize(
    const std::map<std::string, int64_t>& counts, const FeatureSchema& schema,
    std::string contract = {})
{
    FeatureVector vector;
    vector.contract = std::move(contract);
    vector.counts.assign(schema.size(), 0);
    for (const auto& [mnemonic, count] : counts)
    {
        const auto index = schema.index_of(mnemonic);
        if (index == FeatureSchema::npos)
            throw SchemaMismatchError{"schema mismatch: " + mnemonic};
        vector.counts[index] = count;
    }
    return vector;
}
}  // namespace evmtriage

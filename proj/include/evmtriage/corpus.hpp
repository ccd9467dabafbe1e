// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>
#include <evmtriage/hex.hpp>
#include <evmtriage/label.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace evmtriage
{
/// Where an address was first seen. Addresses appearing on both input lists
/// are labeled violation: a flagged token does not become legitimate by also
/// being listed on an exchange.
enum class Provenance
{
    violation_list,
    legitimate_list,
    both_lists,
};

/// One contract in the corpus. Bytecode is absent until fetched; a fetched
/// contract whose code is empty ("0x") keeps an empty byte vector and is
/// reported via empty_code().
struct ContractRecord
{
    std::string address;  ///< normalized lowercase 0x-prefixed address
    Label label = Label::legitimate;
    Provenance provenance = Provenance::legitimate_list;
    std::optional<Bytecode> bytecode;

    [[nodiscard]] bool empty_code() const noexcept
    {
        return bytecode.has_value() && bytecode->bytes.empty();
    }
};

/// A labeled, address-deduplicated collection of contracts.
struct Corpus
{
    std::vector<ContractRecord> records;

    [[nodiscard]] size_t count(Label label) const noexcept
    {
        return static_cast<size_t>(std::count_if(records.begin(), records.end(),
            [label](const ContractRecord& r) { return r.label == label; }));
    }

    [[nodiscard]] size_t overlap_count() const noexcept
    {
        return static_cast<size_t>(std::count_if(records.begin(), records.end(),
            [](const ContractRecord& r) { return r.provenance == Provenance::both_lists; }));
    }
};

namespace detail
{
inline std::string strip_spaces(std::string_view text)
{
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos)
        return {};
    const auto end = text.find_last_not_of(" \t\r\n");
    return std::string{text.substr(begin, end - begin + 1)};
}

/// Parses the CSV list format: header `address[,name]`, one row per token.
inline std::vector<ContractRecord> parse_csv_token_list(const std::string& text, Label label)
{
    std::vector<ContractRecord> records;
    std::istringstream stream{text};
    std::string line;
    size_t line_number = 0;
    bool header_seen = false;
    while (std::getline(stream, line))
    {
        ++line_number;
        const auto comma = line.find(',');
        auto field = strip_spaces(comma == std::string::npos ? line : line.substr(0, comma));
        if (field.empty())
            continue;
        if (!header_seen)
        {
            header_seen = true;
            if (field == "address")  // header row
                continue;
        }
        try
        {
            records.push_back({normalize_address(field), label,
                label == Label::violation ? Provenance::violation_list :
                                            Provenance::legitimate_list,
                std::nullopt});
        }
        catch (const MalformedInputError& e)
        {
            throw MalformedInputError{
                "line " + std::to_string(line_number) + ": " + e.what()};
        }
    }
    return records;
}

/// Parses the JSON list format: an array of objects with an `address` field,
/// or an object wrapping such an array under `tokens` (extra fields from
/// public token lists are tolerated).
inline std::vector<ContractRecord> parse_json_token_list(const std::string& text, Label label)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw MalformedInputError{std::string{"invalid JSON token list: "} + e.what()};
    }
    const nlohmann::json* array = &doc;
    if (doc.is_object())
    {
        if (!doc.contains("tokens") || !doc["tokens"].is_array())
            throw MalformedInputError{"JSON token list object has no \"tokens\" array"};
        array = &doc["tokens"];
    }
    else if (!doc.is_array())
        throw MalformedInputError{"JSON token list must be an array or a {\"tokens\": []} object"};

    std::vector<ContractRecord> records;
    size_t index = 0;
    for (const auto& entry : *array)
    {
        if (!entry.is_object() || !entry.contains("address") || !entry["address"].is_string())
            throw MalformedInputError{
                "token entry " + std::to_string(index) + " has no string \"address\" field"};
        try
        {
            records.push_back({normalize_address(entry["address"].get<std::string>()), label,
                label == Label::violation ? Provenance::violation_list :
                                            Provenance::legitimate_list,
                std::nullopt});
        }
        catch (const MalformedInputError& e)
        {
            throw MalformedInputError{"token entry " + std::to_string(index) + ": " + e.what()};
        }
        ++index;
    }
    return records;
}
}  // namespace detail

/// Loads a token list from a CSV (`address[,name]` header) or JSON file and
/// labels every row. The format is detected from the content: a document
/// starting with '[' or '{' is JSON. Duplicate addresses within one list are
/// collapsed to a single record.
[[nodiscard]] inline std::vector<ContractRecord> load_token_list(
    const std::string& path, Label label)
{
    std::ifstream file{path, std::ios::binary};
    if (!file)
        throw IoError{"cannot open token list: " + path};
    std::string text{std::istreambuf_iterator<char>{file}, std::istreambuf_iterator<char>{}};

    const auto first = text.find_first_not_of(" \t\r\n");
    std::vector<ContractRecord> records;
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{'))
        records = detail::parse_json_token_list(text, label);
    else
        records = detail::parse_csv_token_list(text, label);

    std::vector<ContractRecord> unique;
    std::unordered_set<std::string> seen;
    for (auto& record : records)
        if (seen.insert(record.address).second)
            unique.push_back(std::move(record));
    return unique;
}

[[nodiscard]] constexpr std::string_view to_string(Provenance provenance) noexcept
{
    switch (provenance)
    {
    case Provenance::violation_list:
        return "violation_list";
    case Provenance::legitimate_list:
        return "legitimate_list";
    default:
        return "both_lists";
    }
}

[[nodiscard]] inline Provenance parse_provenance(std::string_view text)
{
    if (text == "violation_list")
        return Provenance::violation_list;
    if (text == "legitimate_list")
        return Provenance::legitimate_list;
    if (text == "both_lists")
        return Provenance::both_lists;
    throw MalformedInputError{"unknown provenance: " + std::string{text}};
}

/// Persists a corpus (addresses, labels, provenance, and any fetched
/// bytecode) as a JSON file that load_corpus reads back losslessly.
inline void save_corpus(const std::string& path, const Corpus& corpus)
{
    nlohmann::json records = nlohmann::json::array();
    for (const auto& record : corpus.records)
    {
        nlohmann::json entry = {{"address", record.address},
            {"label", to_string(record.label)}, {"provenance", to_string(record.provenance)}};
        if (record.bytecode.has_value())
            entry["code"] = to_hex(record.bytecode->bytes);
        records.push_back(std::move(entry));
    }
    std::ofstream file{path, std::ios::binary};
    if (!file)
        throw IoError{"cannot write corpus file: " + path};
    file << nlohmann::json{{"format", "evmtriage-corpus"}, {"version", 1},
                {"records", std::move(records)}}
                .dump(1)
         << '\n';
}

[[nodiscard]] inline Corpus load_corpus(const std::string& path)
{
    std::ifstream file{path, std::ios::binary};
    if (!file)
        throw IoError{"cannot open corpus file: " + path};
    nlohmann::json doc;
    try
    {
        file >> doc;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw MalformedInputError{std::string{"invalid corpus JSON: "} + e.what()};
    }
    if (doc.value("format", "") != "evmtriage-corpus" || doc.value("version", 0) != 1)
        throw MalformedInputError{"not a version-1 evmtriage corpus file"};
    Corpus corpus;
    for (const auto& entry : doc.at("records"))
    {
        ContractRecord record;
        record.address = normalize_address(entry.at("address").get<std::string>());
        record.label = parse_label(entry.at("label").get<std::string>());
        record.provenance = parse_provenance(entry.at("provenance").get<std::string>());
        if (entry.contains("code"))
        {
            record.bytecode = parse_hex(entry["code"].get<std::string>());
            record.bytecode->source_address = record.address;
        }
        corpus.records.push_back(std::move(record));
    }
    return corpus;
}

/// Merges the violation and legitimate lists into one corpus. Addresses on
/// both lists are labeled violation with provenance both_lists; the result
/// contains no duplicate addresses. Idempotent: merging the result's own
/// partitions again changes nothing.
[[nodiscard]] inline Corpus merge_lists(
    const std::vector<ContractRecord>& violations, const std::vector<ContractRecord>& legitimate)
{
    Corpus corpus;
    std::unordered_map<std::string, size_t> index_of;
    for (const auto& record : violations)
    {
        if (index_of.emplace(record.address, corpus.records.size()).second)
        {
            corpus.records.push_back(record);
            corpus.records.back().label = Label::violation;
            // A record may arrive already marked both_lists from a previous
            // merge; re-merging must not downgrade it.
            if (record.provenance != Provenance::both_lists)
                corpus.records.back().provenance = Provenance::violation_list;
        }
    }
    for (const auto& record : legitimate)
    {
        const auto [it, inserted] = index_of.emplace(record.address, corpus.records.size());
        if (inserted)
        {
            corpus.records.push_back(record);
            corpus.records.back().label = Label::legitimate;
            corpus.records.back().provenance = Provenance::legitimate_list;
        }
        else
        {
            corpus.records[it->second].label = Label::violation;
            corpus.records[it->second].provenance = Provenance::both_lists;
        }
    }
    return corpus;
}
}  // namespace evmtriage

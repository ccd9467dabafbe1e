// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>
#include <evmtriage/features.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace evmtriage
{
/// Feature-matrix CSV format: header `address,label,<mnemonic...>`, one row
/// per contract, labels written as "violation"/"legitimate" (numeric 1/0
/// accepted on read), counts as plain integers. The format round-trips
/// losslessly. Externally produced exports whose columns differ only in order
/// can be loaded and re-aligned with FeatureMatrix::select_columns.
inline void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix)
{
    out << "address,label";
    for (const auto& mnemonic : matrix.schema.mnemonics())
        out << ',' << mnemonic;
    out << '\n';
    for (size_t i = 0; i < matrix.rows.size(); ++i)
    {
        out << matrix.rows[i].contract << ',' << to_string(matrix.labels[i]);
        for (const auto count : matrix.rows[i].counts)
            out << ',' << count;
        out << '\n';
    }
}

inline void write_feature_csv(const std::string& path, const FeatureMatrix& matrix)
{
    std::ofstream file{path, std::ios::binary};
    if (!file)
        throw IoError{"cannot write feature CSV: " + path};
    write_feature_csv(file, matrix);
}

namespace detail
{
inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    size_t begin = 0;
    while (true)
    {
        const auto comma = line.find(',', begin);
        if (comma == std::string::npos)
        {
            fields.push_back(line.substr(begin));
            break;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}
}  // namespace detail

[[nodiscard]] inline FeatureMatrix read_feature_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw MalformedInputError{"empty feature CSV"};
    auto header = detail::split_csv_line(line);
    if (header.size() < 2 || header[0] != "address" || header[1] != "label")
        throw MalformedInputError{"feature CSV header must start with address,label"};

    FeatureMatrix matrix;
    matrix.schema = FeatureSchema{{header.begin() + 2, header.end()}};

    size_t line_number = 1;
    while (std::getline(in, line))
    {
        ++line_number;
        if (line.empty() || line == "\r")
            continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw MalformedInputError{"line " + std::to_string(line_number) + ": expected " +
                                      std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size())};
        FeatureVector row;
        row.contract = fields[0];
        row.counts.reserve(matrix.schema.size());
        for (size_t j = 2; j < fields.size(); ++j)
        {
            int64_t count = 0;
            const auto* begin = fields[j].data();
            const auto* end = begin + fields[j].size();
            const auto [ptr, ec] = std::from_chars(begin, end, count);
            if (ec != std::errc{} || ptr != end || count < 0)
                throw MalformedInputError{"line " + std::to_string(line_number) +
                                          ": bad count \"" + fields[j] + "\""};
            row.counts.push_back(count);
        }
        matrix.rows.push_back(std::move(row));
        matrix.labels.push_back(parse_label(fields[1]));
    }
    return matrix;
}

[[nodiscard]] inline FeatureMatrix read_feature_csv(const std::string& path)
{
    std::ifstream file{path, std::ios::binary};
    if (!file)
        throw IoError{"cannot open feature CSV: " + path};
    return read_feature_csv(file);
}
}  // namespace evmtriage

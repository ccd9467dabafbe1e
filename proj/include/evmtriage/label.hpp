// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>

#include <string>
#include <string_view>

namespace evmtriage
{
/// Binary class label attached to every contract in a corpus.
///
/// The underlying values are fixed (legitimate=0, violation=1) so labels can
/// be used directly as regression targets and array indices.
enum class Label : int
{
    legitimate = 0,
    violation = 1,
};

[[nodiscard]] constexpr std::string_view to_string(Label label) noexcept
{
    return label == Label::violation ? "violation" : "legitimate";
}

/// Parses a label from its canonical name or its numeric form ("0"/"1").
[[nodiscard]] inline Label parse_label(std::string_view text)
{
    if (text == "violation" || text == "1")
        return Label::violation;
    if (text == "legitimate" || text == "0")
        return Label::legitimate;
    throw MalformedInputError{"unknown label: " + std::string{text}};
}
}  // namespace evmtriage

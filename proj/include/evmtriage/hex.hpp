// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmtriage
{
/// Raw EVM code for one account. An empty byte sequence is valid
/// (self-destructed or non-contract account).
struct Bytecode
{
    std::vector<uint8_t> bytes;
    std::optional<std::string> source_address;

    [[nodiscard]] bool empty() const noexcept { return bytes.empty(); }
    [[nodiscard]] size_t size() const noexcept { return bytes.size(); }
};

namespace detail
{
inline constexpr int hex_digit(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

inline constexpr char hex_char(unsigned v) noexcept
{
    return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
}

inline std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                             s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}
}  // namespace detail

/// Decodes a bare or "0x"-prefixed hex string into bytes. Surrounding
/// whitespace is ignored. Throws MalformedInputError on odd length or on the
/// first non-hex character (reporting its index within the digit run).
inline Bytecode parse_hex(std::string_view text)
{
    auto s = detail::trim(text);
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        s.remove_prefix(2);

    if (s.size() % 2 != 0)
        throw MalformedInputError(
            "odd-length hex string (" + std::to_string(s.size()) + " digits)");

    Bytecode code;
    code.bytes.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2)
    {
        const int hi = detail::hex_digit(s[i]);
        const int lo = detail::hex_digit(s[i + 1]);
        if (hi < 0 || lo < 0)
        {
            const size_t at = hi < 0 ? i : i + 1;
            throw MalformedInputError(std::string{"non-hex character '"} + s[at] +
                                      "' at index " + std::to_string(at));
        }
        code.bytes.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return code;
}

/// Lowercase hex encoding, "0x"-prefixed by default.
inline std::string to_hex(std::span<const uint8_t> bytes, bool prefix = true)
{
    std::string out;
    out.reserve(bytes.size() * 2 + 2);
    if (prefix)
        out += "0x";
    for (const auto b : bytes)
    {
        out += detail::hex_char(b >> 4);
        out += detail::hex_char(b & 0x0f);
    }
    return out;
}

/// Lowercases a 20-byte hex address, validating shape. Throws
/// MalformedInputError when the input is not 0x + 40 hex digits
/// (a bare 40-digit form is accepted too).
inline std::string normalize_address(std::string_view text)
{
    auto s = detail::trim(text);
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        s.remove_prefix(2);
    if (s.size() != 40)
        throw MalformedInputError("address must be 40 hex digits, got " +
                                  std::to_string(s.size()) + ": '" + std::string(text) + "'");
    std::string out = "0x";
    out.reserve(42);
    for (const char c : s)
    {
        if (detail::hex_digit(c) < 0)
            throw MalformedInputError(std::string{"non-hex character '"} + c + "' in address '" +
                                      std::string(text) + "'");
        out += (c >= 'A' && c <= 'F') ? static_cast<char>(c - 'A' + 'a') : c;
    }
    return out;
}

}  // namespace evmtriage

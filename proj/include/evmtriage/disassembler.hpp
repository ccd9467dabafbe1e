// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/hex.hpp>
#include <evmtriage/opcodes.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evmtriage
{
/// One decoded instruction. For PUSH-N the immediate holds the N following
/// octets; when the code ends mid-immediate the instruction keeps whatever
/// octets remain and is flagged truncated.
struct Instruction
{
    uint32_t offset = 0;
    uint8_t opcode = 0;
    std::string_view mnemonic;
    std::vector<uint8_t> immediate;
    bool truncated = false;

    bool operator==(const Instruction&) const = default;
};

/// Linear decode of the whole byte stream. Total: never fails; unassigned
/// bytes become INVALID instructions, and Solidity metadata tails decode like
/// any other code so opcode counts cover the bytecode exactly as fetched.
inline std::vector<Instruction> disassemble(std::span<const uint8_t> code)
{
    std::vector<Instruction> out;
    out.reserve(code.size());
    size_t i = 0;
    while (i < code.size())
    {
        const uint8_t op = code[i];
        const auto& info = opcode_info(op);
        Instruction ins;
        ins.offset = static_cast<uint32_t>(i);
        ins.opcode = op;
        ins.mnemonic = info.mnemonic;
        ++i;
        if (info.immediate_size > 0)
        {
            const size_t want = info.immediate_size;
            const size_t have = std::min(want, code.size() - i);
            ins.immediate.assign(code.begin() + static_cast<ptrdiff_t>(i),
                code.begin() + static_cast<ptrdiff_t>(i + have));
            ins.truncated = have < want;
            i += have;
        }
        out.push_back(std::move(ins));
    }
    return out;
}

inline std::vector<Instruction> disassemble(const Bytecode& code)
{
    return disassemble(std::span<const uint8_t>{code.bytes});
}

/// Inverse of disassemble: opcode byte followed by its immediate, in order.
inline std::vector<uint8_t> reassemble(const std::vector<Instruction>& instructions)
{
    std::vector<uint8_t> out;
    for (const auto& ins : instructions)
    {
        out.push_back(ins.opcode);
        out.insert(out.end(), ins.immediate.begin(), ins.immediate.end());
    }
    return out;
}

/// Text form: `<offset-hex> <MNEMONIC> [<immediate-hex>]`.
inline std::string format_instruction(const Instruction& ins)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string off;
    for (uint32_t v = ins.offset; v != 0; v >>= 4)
        off.insert(off.begin(), digits[v & 0xf]);
    while (off.size() < 4)
        off.insert(off.begin(), '0');

    std::string line = off;
    line += ' ';
    line += ins.mnemonic;
    if (!ins.immediate.empty())
    {
        line += ' ';
        line += to_hex(ins.immediate, false);
    }
    return line;
}

}  // namespace evmtriage

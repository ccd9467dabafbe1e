// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace evmtriage
{
/// One row of the instruction table.
struct OpcodeInfo
{
    std::string_view mnemonic;
    uint8_t immediate_size = 0;
    bool defined = false;
};

/// Sentinel mnemonic for the designated-invalid opcode (0xfe) and for every
/// unassigned byte. Counted as a feature of its own when it appears.
inline constexpr std::string_view kInvalidMnemonic = "INVALID";

inline constexpr bool is_push(uint8_t op) noexcept
{
    return op >= 0x60 && op <= 0x7f;
}

/// Immediate width in bytes: N for PUSH-N, 0 otherwise.
inline constexpr uint8_t push_immediate_size(uint8_t op) noexcept
{
    return is_push(op) ? static_cast<uint8_t>(op - 0x5f) : 0;
}

namespace detail
{
// Instruction set as of the London fork (no PUSH0 or later additions).
inline constexpr std::array<OpcodeInfo, 256> make_opcode_table() noexcept
{
    std::array<OpcodeInfo, 256> t{};
    for (auto& e : t)
        e = OpcodeInfo{kInvalidMnemonic, 0, false};

    auto def = [&t](uint8_t op, std::string_view name) {
        t[op] = OpcodeInfo{name, push_immediate_size(op), true};
    };

    def(0x00, "STOP");
    def(0x01, "ADD");
    def(0x02, "MUL");
    def(0x03, "SUB");
    def(0x04, "DIV");
    def(0x05, "SDIV");
    def(0x06, "MOD");
    def(0x07, "SMOD");
    def(0x08, "ADDMOD");
    def(0x09, "MULMOD");
    def(0x0a, "EXP");
    def(0x0b, "SIGNEXTEND");

    def(0x10, "LT");
    def(0x11, "GT");
    def(0x12, "SLT");
    def(0x13, "SGT");
    def(0x14, "EQ");
    def(0x15, "ISZERO");
    def(0x16, "AND");
    def(0x17, "OR");
    def(0x18, "XOR");
    def(0x19, "NOT");
    def(0x1a, "BYTE");
    def(0x1b, "SHL");
    def(0x1c, "SHR");
    def(0x1d, "SAR");

    def(0x20, "SHA3");

    def(0x30, "ADDRESS");
    def(0x31, "BALANCE");
    def(0x32, "ORIGIN");
    def(0x33, "CALLER");
    def(0x34, "CALLVALUE");
    def(0x35, "CALLDATALOAD");
    def(0x36, "CALLDATASIZE");
    def(0x37, "CALLDATACOPY");
    def(0x38, "CODESIZE");
    def(0x39, "CODECOPY");
    def(0x3a, "GASPRICE");
    def(0x3b, "EXTCODESIZE");
    def(0x3c, "EXTCODECOPY");
    def(0x3d, "RETURNDATASIZE");
    def(0x3e, "RETURNDATACOPY");
    def(0x3f, "EXTCODEHASH");

    def(0x40, "BLOCKHASH");
    def(0x41, "COINBASE");
    def(0x42, "TIMESTAMP");
    def(0x43, "NUMBER");
    def(0x44, "DIFFICULTY");
    def(0x45, "GASLIMIT");
    def(0x46, "CHAINID");
    def(0x47, "SELFBALANCE");
    def(0x48, "BASEFEE");

    def(0x50, "POP");
    def(0x51, "MLOAD");
    def(0x52, "MSTORE");
    def(0x53, "MSTORE8");
    def(0x54, "SLOAD");
    def(0x55, "SSTORE");
    def(0x56, "JUMP");
    def(0x57, "JUMPI");
    def(0x58, "PC");
    def(0x59, "MSIZE");
    def(0x5a, "GAS");
    def(0x5b, "JUMPDEST");

    constexpr std::string_view push_names[] = {"PUSH1", "PUSH2", "PUSH3", "PUSH4", "PUSH5",
        "PUSH6", "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14",
        "PUSH15", "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23",
        "PUSH24", "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
    for (int i = 0; i < 32; ++i)
        def(static_cast<uint8_t>(0x60 + i), push_names[i]);

    constexpr std::string_view dup_names[] = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5", "DUP6",
        "DUP7", "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
    for (int i = 0; i < 16; ++i)
        def(static_cast<uint8_t>(0x80 + i), dup_names[i]);

    constexpr std::string_view swap_names[] = {"SWAP1", "SWAP2", "SWAP3", "SWAP4", "SWAP5",
        "SWAP6", "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14",
        "SWAP15", "SWAP16"};
    for (int i = 0; i < 16; ++i)
        def(static_cast<uint8_t>(0x90 + i), swap_names[i]);

    def(0xa0, "LOG0");
    def(0xa1, "LOG1");
    def(0xa2, "LOG2");
    def(0xa3, "LOG3");
    def(0xa4, "LOG4");

    def(0xf0, "CREATE");
    def(0xf1, "CALL");
    def(0xf2, "CALLCODE");
    def(0xf3, "RETURN");
    def(0xf4, "DELEGATECALL");
    def(0xf5, "CREATE2");
    def(0xfa, "STATICCALL");
    def(0xfd, "REVERT");
    def(0xfe, "INVALID");
    def(0xff, "SELFDESTRUCT");

    return t;
}
}  // namespace detail

inline constexpr std::array<OpcodeInfo, 256> kOpcodeTable = detail::make_opcode_table();

inline constexpr const OpcodeInfo& opcode_info(uint8_t op) noexcept
{
    return kOpcodeTable[op];
}

inline constexpr std::string_view mnemonic_of(uint8_t op) noexcept
{
    return kOpcodeTable[op].mnemonic;
}

/// Reverse lookup by mnemonic. "INVALID" resolves to the designated 0xfe.
inline std::optional<uint8_t> opcode_for_mnemonic(std::string_view name) noexcept
{
    if (name == kInvalidMnemonic)
        return uint8_t{0xfe};
    for (int op = 0; op < 256; ++op)
        if (kOpcodeTable[op].defined && kOpcodeTable[op].mnemonic == name)
            return static_cast<uint8_t>(op);
    return std::nullopt;
}

}  // namespace evmtriage

// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace evmtriage
{
/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Bad user-supplied input: malformed hex, addresses, CSV/JSON rows.
class MalformedInputError : public Error
{
public:
    explicit MalformedInputError(const std::string& what) : Error(what) {}
};

class SchemaMismatchError : public Error
{
public:
    explicit SchemaMismatchError(const std::string& what) : Error(what) {}
};

/// Non-finite or otherwise unusable numeric data.
class InvalidDataError : public Error
{
public:
    explicit InvalidDataError(const std::string& what) : Error(what) {}
};

/// A supervised operation received labels with fewer than two classes.
class DegenerateLabelsError : public Error
{
public:
    explicit DegenerateLabelsError(const std::string& what) : Error(what) {}
};

/// Mismatched dimensions between inputs.
class ShapeError : public Error
{
public:
    explicit ShapeError(const std::string& what) : Error(what) {}
};

class InsufficientDataError : public Error
{
public:
    explicit InsufficientDataError(const std::string& what) : Error(what) {}
};

/// A random split could not produce a two-class training set.
class StratificationError : public Error
{
public:
    explicit StratificationError(const std::string& what) : Error(what) {}
};

/// Operation invoked on an object in the wrong state (e.g. unfitted model).
class StateError : public Error
{
public:
    explicit StateError(const std::string& what) : Error(what) {}
};

/// Cosine similarity of a zero vector.
class UndefinedSimilarityError : public Error
{
public:
    explicit UndefinedSimilarityError(const std::string& what) : Error(what) {}
};

/// Effect size with zero pooled spread but unequal means.
class UndefinedEffectError : public Error
{
public:
    explicit UndefinedEffectError(const std::string& what) : Error(what) {}
};

/// Filesystem-level failure.
class IoError : public Error
{
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Transport or protocol failure talking to a JSON-RPC endpoint.
class RpcError : public Error
{
public:
    explicit RpcError(const std::string& what) : Error(what) {}
};

}  // namespace evmtriage

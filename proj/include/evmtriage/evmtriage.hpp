// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Umbrella header pulling in the whole library.

#include <evmtriage/corpus.hpp>
#include <evmtriage/disassembler.hpp>
#include <evmtriage/elastic_net.hpp>
#include <evmtriage/error.hpp>
#include <evmtriage/experiment.hpp>
#include <evmtriage/feature_csv.hpp>
#include <evmtriage/features.hpp>
#include <evmtriage/hex.hpp>
#include <evmtriage/label.hpp>
#include <evmtriage/logistic.hpp>
#include <evmtriage/metrics.hpp>
#include <evmtriage/model_io.hpp>
#include <evmtriage/opcodes.hpp>
#include <evmtriage/pipeline.hpp>
#include <evmtriage/random_forest.hpp>
#include <evmtriage/report_io.hpp>
#include <evmtriage/rng.hpp>
#include <evmtriage/rpc.hpp>
#include <evmtriage/sampling.hpp>
#include <evmtriage/standardize.hpp>
#include <evmtriage/stats.hpp>

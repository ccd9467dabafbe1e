// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/corpus.hpp>
#include <evmtriage/error.hpp>
#include <evmtriage/hex.hpp>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace evmtriage
{
/// Transport configuration for bytecode fetching.
struct FetchOptions
{
    std::string endpoint;   ///< e.g. "http://127.0.0.1:8545" or ".../rpc/v1"
    std::string cache_dir;  ///< one file per address; "" disables caching
    size_t workers = 4;     ///< bounded fetch concurrency
    size_t max_retries = 3;
    int backoff_initial_ms = 100;  ///< doubles per retry
    int timeout_seconds = 10;
};

struct FetchFailure
{
    std::string address;
    std::string message;
};

/// Outcome summary of a fetch pass. Failures keep corpus record order.
struct FetchReport
{
    size_t from_cache = 0;
    size_t fetched = 0;
    size_t already_present = 0;
    size_t empty_code = 0;
    std::vector<FetchFailure> failures;
};

namespace detail
{
struct EndpointParts
{
    std::string base;  ///< scheme://host[:port]
    std::string path;  ///< request path, at least "/"
};

[[nodiscard]] inline EndpointParts parse_endpoint(const std::string& endpoint)
{
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw MalformedInputError{"endpoint needs a scheme: " + endpoint};
    const auto path_begin = endpoint.find('/', scheme_end + 3);
    if (path_begin == std::string::npos)
        return {endpoint, "/"};
    return {endpoint.substr(0, path_begin), endpoint.substr(path_begin)};
}

[[nodiscard]] inline std::filesystem::path cache_file(
    const std::string& cache_dir, const std::string& address)
{
    return std::filesystem::path{cache_dir} / (address + ".hex");
}

[[nodiscard]] inline std::optional<std::string> read_cache(
    const std::string& cache_dir, const std::string& address)
{
    if (cache_dir.empty())
        return std::nullopt;
    std::ifstream file{cache_file(cache_dir, address), std::ios::binary};
    if (!file)
        return std::nullopt;
    std::string content{std::istreambuf_iterator<char>{file}, std::istreambuf_iterator<char>{}};
    while (!content.empty() && (content.back() == '\n' || content.back() == '\r'))
        content.pop_back();
    return content;
}

inline void write_cache(
    const std::string& cache_dir, const std::string& address, const std::string& code_hex)
{
    if (cache_dir.empty())
        return;
    std::ofstream file{cache_file(cache_dir, address), std::ios::binary};
    if (!file)
        throw IoError{"cannot write cache file for " + address};
    file << code_hex << '\n';
}

/// One eth_getCode call with bounded retries and exponential backoff.
/// Returns the raw hex string or throws RpcError with the final failure.
[[nodiscard]] inline std::string get_code(httplib::Client& client, const std::string& path,
    const std::string& address, int id, const FetchOptions& options)
{
    const nlohmann::json request = {{"jsonrpc", "2.0"}, {"method", "eth_getCode"},
        {"params", {address, "latest"}}, {"id", id}};
    const auto body = request.dump();

    std::string last_error;
    for (size_t attempt = 0; attempt <= options.max_retries; ++attempt)
    {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds{
                options.backoff_initial_ms << (attempt - 1)});
        auto response = client.Post(path, body, "application/json");
        if (!response)
        {
            last_error = "transport error: " + httplib::to_string(response.error());
            continue;  // retryable
        }
        if (response->status != 200)
        {
            last_error = "HTTP status " + std::to_string(response->status);
            continue;  // retryable (rate limits, gateway errors)
        }
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(response->body);
        }
        catch (const nlohmann::json::parse_error& e)
        {
            throw RpcError{std::string{"non-JSON response: "} + e.what()};
        }
        if (doc.contains("error"))
            throw RpcError{"RPC error: " + doc["error"].dump()};
        if (!doc.contains("result") || !doc["result"].is_string())
            throw RpcError{"response has no string result"};
        return doc["result"].get<std::string>();
    }
    throw RpcError{last_error + " after " + std::to_string(options.max_retries + 1) + " attempts"};
}
}  // namespace detail

/// Populates every record's bytecode from the per-address cache or via
/// `eth_getCode(address, "latest")`, persisting fresh responses to the cache.
/// Per-address failures are collected into the report and the pass continues;
/// records whose code is "0x" are kept with empty bytecode and counted.
/// A warm cache makes the pass byte-identical to the previous run with zero
/// network calls.
inline FetchReport fetch_bytecode(Corpus& corpus, const FetchOptions& options)
{
    if (!options.cache_dir.empty())
        std::filesystem::create_directories(options.cache_dir);

    FetchReport report;
    std::vector<size_t> pending;
    for (size_t i = 0; i < corpus.records.size(); ++i)
    {
        auto& record = corpus.records[i];
        if (record.bytecode.has_value())
        {
            ++report.already_present;
            continue;
        }
        if (const auto cached = detail::read_cache(options.cache_dir, record.address))
        {
            record.bytecode = parse_hex(*cached);
            record.bytecode->source_address = record.address;
            ++report.from_cache;
            continue;
        }
        pending.push_back(i);
    }

    std::vector<std::optional<FetchFailure>> failures(pending.size());
    if (!pending.empty())
    {
        if (options.endpoint.empty())
            throw RpcError{"no endpoint configured and cache is cold"};
        const auto endpoint = detail::parse_endpoint(options.endpoint);
        std::atomic<size_t> cursor{0};
        std::atomic<size_t> fetched{0};
        const auto worker = [&]() {
            // One client per worker: httplib clients are not thread-safe.
            httplib::Client client{endpoint.base};
            client.set_connection_timeout(options.timeout_seconds);
            client.set_read_timeout(options.timeout_seconds);
            while (true)
            {
                const auto slot = cursor.fetch_add(1);
                if (slot >= pending.size())
                    return;
                auto& record = corpus.records[pending[slot]];
                try
                {
                    const auto code_hex = detail::get_code(client, endpoint.path,
                        record.address, static_cast<int>(pending[slot]), options);
                    auto bytecode = parse_hex(code_hex);
                    bytecode.source_address = record.address;
                    detail::write_cache(options.cache_dir, record.address, code_hex);
                    record.bytecode = std::move(bytecode);
                    fetched.fetch_add(1);
                }
                catch (const std::exception& e)
                {
                    failures[slot] = FetchFailure{record.address, e.what()};
                }
            }
        };
        const auto workers = std::max<size_t>(1, std::min(options.workers, pending.size()));
        if (workers == 1)
        {
            worker();
        }
        else
        {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (size_t t = 0; t < workers; ++t)
                pool.emplace_back(worker);
            for (auto& thread : pool)
                thread.join();
        }
        report.fetched = fetched.load();
    }

    for (auto& failure : failures)
        if (failure.has_value())
            report.failures.push_back(std::move(*failure));
    for (const auto& record : corpus.records)
        if (record.empty_code())
            ++report.empty_code;
    return report;
}
}  // namespace evmtriage

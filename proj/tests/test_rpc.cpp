// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmtriage/rpc.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <unistd.h>

using namespace evmtriage;

namespace
{
std::string address_of(int n)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "0x%040x", n);
    return buffer;
}

/// Local JSON-RPC stub:
///   address 1 → code 0x6001600155; address 2 → empty code "0x";
///   address 3 → HTTP 500 (retryable); address 4 → JSON-RPC error object;
///   address 5 → non-JSON body; address 6 → JSON without a result field.
class RpcTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        cache_dir_ = std::filesystem::temp_directory_path() /
                     ("evmtriage_rpc_" + std::to_string(::getpid()) + "_" + info->name());

        server_.Post("/rpc", [this](const httplib::Request& request, httplib::Response& response) {
            nlohmann::json doc;
            try
            {
                doc = nlohmann::json::parse(request.body);
            }
            catch (...)
            {
                response.status = 400;
                return;
            }
            const auto address = doc["params"][0].get<std::string>();
            {
                const std::lock_guard lock{mutex_};
                ++attempts_[address];
                last_request_ = doc;
            }
            const auto reply = [&](const nlohmann::json& body) {
                response.set_content(body.dump(), "application/json");
            };
            if (address == address_of(1))
                reply({{"jsonrpc", "2.0"}, {"id", doc["id"]}, {"result", "0x6001600155"}});
            else if (address == address_of(2))
                reply({{"jsonrpc", "2.0"}, {"id", doc["id"]}, {"result", "0x"}});
            else if (address == address_of(3))
                response.status = 500;
            else if (address == address_of(4))
                reply({{"jsonrpc", "2.0"}, {"id", doc["id"]},
                    {"error", {{"code", -32000}, {"message", "execution reverted"}}}});
            else if (address == address_of(5))
                response.set_content("definitely not json", "text/plain");
            else
                reply({{"jsonrpc", "2.0"}, {"id", doc["id"]}});
        });

        port_ = server_.bind_to_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        server_thread_ = std::thread{[this]() { server_.listen_after_bind(); }};
        server_.wait_until_ready();
    }

    void TearDown() override
    {
        server_.stop();
        if (server_thread_.joinable())
            server_thread_.join();
        std::filesystem::remove_all(cache_dir_);
    }

    [[nodiscard]] FetchOptions options() const
    {
        FetchOptions opts;
        opts.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/rpc";
        opts.cache_dir = cache_dir_.string();
        opts.backoff_initial_ms = 1;
        return opts;
    }

    [[nodiscard]] int attempts(const std::string& address)
    {
        const std::lock_guard lock{mutex_};
        return attempts_[address];
    }

    [[nodiscard]] nlohmann::json last_request()
    {
        const std::lock_guard lock{mutex_};
        return last_request_;
    }

    static Corpus corpus_of(std::initializer_list<int> ids)
    {
        Corpus corpus;
        for (const auto id : ids)
        {
            ContractRecord record;
            record.address = address_of(id);
            record.label = Label::violation;
            record.provenance = Provenance::violation_list;
            corpus.records.push_back(std::move(record));
        }
        return corpus;
    }

    httplib::Server server_;
    std::thread server_thread_;
    int port_ = 0;
    std::filesystem::path cache_dir_;
    std::mutex mutex_;
    std::map<std::string, int> attempts_;
    nlohmann::json last_request_;
};
}  // namespace

TEST_F(RpcTest, FetchPopulatesBytecodeAndCache)
{
    auto corpus = corpus_of({1, 2});
    const auto report = fetch_bytecode(corpus, options());

    EXPECT_EQ(report.fetched, 2u);
    EXPECT_EQ(report.from_cache, 0u);
    EXPECT_EQ(report.empty_code, 1u);
    EXPECT_TRUE(report.failures.empty());

    ASSERT_TRUE(corpus.records[0].bytecode.has_value());
    EXPECT_EQ(corpus.records[0].bytecode->bytes,
        (std::vector<uint8_t>{0x60, 0x01, 0x60, 0x01, 0x55}));
    EXPECT_EQ(corpus.records[0].bytecode->source_address, address_of(1));
    ASSERT_TRUE(corpus.records[1].bytecode.has_value());
    EXPECT_TRUE(corpus.records[1].empty_code());

    // The request must be a well-formed eth_getCode at the latest block.
    const auto request = last_request();
    EXPECT_EQ(request["jsonrpc"], "2.0");
    EXPECT_EQ(request["method"], "eth_getCode");
    ASSERT_EQ(request["params"].size(), 2u);
    EXPECT_EQ(request["params"][1], "latest");

    // Cache files hold the raw hex plus a trailing newline.
    std::ifstream cached{cache_dir_ / (address_of(1) + ".hex"), std::ios::binary};
    ASSERT_TRUE(cached.is_open());
    std::string content{std::istreambuf_iterator<char>{cached},
        std::istreambuf_iterator<char>{}};
    EXPECT_EQ(content, "0x6001600155\n");
}

TEST_F(RpcTest, WarmCacheFetchesNothingAndNeedsNoEndpoint)
{
    auto first = corpus_of({1, 2});
    (void)fetch_bytecode(first, options());
    const auto first_attempts = attempts(address_of(1));
    EXPECT_EQ(first_attempts, 1);

    auto second = corpus_of({1, 2});
    auto warm_options = options();
    warm_options.endpoint.clear();  // warm cache must not need a network
    const auto report = fetch_bytecode(second, warm_options);

    EXPECT_EQ(report.from_cache, 2u);
    EXPECT_EQ(report.fetched, 0u);
    EXPECT_EQ(attempts(address_of(1)), first_attempts);  // no new requests
    EXPECT_EQ(second.records[0].bytecode->bytes, first.records[0].bytecode->bytes);
    EXPECT_TRUE(second.records[1].empty_code());
}

TEST_F(RpcTest, ServerErrorRetriesWithBackoffThenRecordsFailure)
{
    auto corpus = corpus_of({3, 1});
    auto opts = options();
    opts.max_retries = 2;
    const auto report = fetch_bytecode(corpus, opts);

    // max_retries=2 → 3 attempts total for the failing address.
    EXPECT_EQ(attempts(address_of(3)), 3);
    ASSERT_EQ(report.failures.size(), 1u);
    EXPECT_EQ(report.failures[0].address, address_of(3));
    EXPECT_NE(report.failures[0].message.find("HTTP status 500"), std::string::npos);
    EXPECT_NE(report.failures[0].message.find("3 attempts"), std::string::npos);

    // The healthy address is unaffected by its neighbor's failure.
    EXPECT_EQ(report.fetched, 1u);
    EXPECT_TRUE(corpus.records[1].bytecode.has_value());
    EXPECT_FALSE(corpus.records[0].bytecode.has_value());
}

TEST_F(RpcTest, RpcLevelErrorsFailImmediatelyWithoutRetry)
{
    auto corpus = corpus_of({4, 5, 6});
    const auto report = fetch_bytecode(corpus, options());

    ASSERT_EQ(report.failures.size(), 3u);
    EXPECT_EQ(attempts(address_of(4)), 1);  // not retried
    EXPECT_NE(report.failures[0].message.find("execution reverted"), std::string::npos);
    EXPECT_NE(report.failures[1].message.find("non-JSON"), std::string::npos);
    EXPECT_NE(report.failures[2].message.find("no string result"), std::string::npos);
    EXPECT_EQ(report.fetched, 0u);
}

TEST_F(RpcTest, AlreadyPresentRecordsAreNotRefetched)
{
    auto corpus = corpus_of({1});
    corpus.records[0].bytecode = parse_hex("0x00");
    const auto report = fetch_bytecode(corpus, options());
    EXPECT_EQ(report.already_present, 1u);
    EXPECT_EQ(report.fetched, 0u);
    EXPECT_EQ(attempts(address_of(1)), 0);
    EXPECT_EQ(corpus.records[0].bytecode->bytes, (std::vector<uint8_t>{0x00}));
}

TEST_F(RpcTest, ColdCacheWithoutEndpointRaises)
{
    auto corpus = corpus_of({1});
    FetchOptions opts;
    opts.cache_dir = (cache_dir_ / "empty").string();
    EXPECT_THROW(fetch_bytecode(corpus, opts), RpcError);
}

TEST(ParseEndpoint, SplitsBaseAndPath)
{
    const auto bare = detail::parse_endpoint("http://node.example:8545");
    EXPECT_EQ(bare.base, "http://node.example:8545");
    EXPECT_EQ(bare.path, "/");

    const auto with_path = detail::parse_endpoint("http://node.example:8545/rpc/v1");
    EXPECT_EQ(with_path.base, "http://node.example:8545");
    EXPECT_EQ(with_path.path, "/rpc/v1");

    EXPECT_THROW(detail::parse_endpoint("node.example:8545"), MalformedInputError);
}

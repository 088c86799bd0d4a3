#include <thread>
#include <vector>

#include "doctest.h"
#include "snf/stream_codec.hpp"
#include "snf/transport.hpp"
#include "support.hpp"

using snf::ActivationConfig;
using snf::BlockKey;
using snf::FetchResult;
using snf::Matrix;
using snf::Rng;
using snf::StreamableNet;
using snf::StreamMeta;
using snf::StreamServer;

namespace {

std::vector<uint8_t> sample_stream() {
    Rng rng(5);
    StreamableNet net(1, 1, 2, 3, ActivationConfig{30.0}, rng);
    net.grow(6, rng, snf::InitMode::siren_new_blocks);
    net.grow(9, rng, snf::InitMode::siren_new_blocks);
    return snf::pack(net, StreamMeta{0.5, 0.5});
}

}  // namespace

TEST_CASE("a full fetch reproduces the stream byte for byte") {
    const std::vector<uint8_t> stream = sample_stream();
    StreamServer server(0);
    REQUIRE(server.port() != 0);
    int sent = 0;
    std::thread t([&] { sent = server.serve_once(stream); });

    std::vector<int> stages_seen;
    const FetchResult result =
        snf::fetch("127.0.0.1", server.port(), -1,
                   [&](int stage, const StreamableNet& net) {
                       stages_seen.push_back(stage);
                       CHECK(net.num_stages() == stage);
                   });
    t.join();
    CHECK(sent == 4);  // header + 3 chunks
    CHECK(result.bytes == stream);
    CHECK(result.stages_received == 3);
    CHECK(!result.truncated);
    CHECK(stages_seen == std::vector<int>{1, 2, 3});
}

TEST_CASE("k_max stops the client after that many chunks") {
    const std::vector<uint8_t> stream = sample_stream();
    StreamServer server(0);
    std::thread t([&] { server.serve_once(stream); });

    std::vector<int> stages_seen;
    const FetchResult result =
        snf::fetch("127.0.0.1", server.port(), 2,
                   [&](int stage, const StreamableNet&) { stages_seen.push_back(stage); });
    t.join();
    CHECK(result.stages_received == 2);
    CHECK(!result.truncated);
    CHECK(stages_seen == std::vector<int>{1, 2});

    // The received prefix decodes to the same net as the full stream's prefix.
    const StreamableNet direct = snf::decode_prefix(stream, 2);
    const StreamableNet fetched = snf::decode_prefix(result.bytes, 2);
    for (int s = 1; s <= 2; ++s)
        for (const BlockKey& key : direct.stage_keys(s)) {
            const Matrix& a = direct.param(key);
            const Matrix& b = fetched.param(key);
            for (size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);
        }
    CHECK_THROWS_AS(snf::decode_prefix(result.bytes, 3), snf::DecodeError);
}

TEST_CASE("a server that stops early leaves the client truncated but usable") {
    const std::vector<uint8_t> stream = sample_stream();
    StreamServer server(0);
    std::thread t([&] { server.serve_once(stream, 1); });

    std::vector<int> stages_seen;
    const FetchResult result =
        snf::fetch("127.0.0.1", server.port(), -1,
                   [&](int stage, const StreamableNet&) { stages_seen.push_back(stage); });
    t.join();
    CHECK(result.stages_received == 1);
    CHECK(result.truncated);
    CHECK(stages_seen == std::vector<int>{1});
    CHECK_NOTHROW(snf::decode_prefix(result.bytes, 1));
}

TEST_CASE("connecting to a dead port fails with an io error") {
    uint16_t free_port = 0;
    {
        StreamServer probe(0);
        free_port = probe.port();
    }  // closed again; nothing listens there now
    CHECK_THROWS_AS(snf::fetch("127.0.0.1", free_port, -1, {}), snf::IoError);
}

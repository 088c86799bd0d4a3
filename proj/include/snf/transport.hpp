#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "snf/net.hpp"

namespace snf {

// One-shot TCP sender for a packed stream. Messages are length-prefixed
// (u64 little-endian); message 0 is the header, message k is chunk k, each
// flushed as soon as it is written so a receiver can decode incrementally.
class StreamServer {
public:
    explicit StreamServer(uint16_t port);  // 0 picks an ephemeral port
    ~StreamServer();
    StreamServer(const StreamServer&) = delete;
    StreamServer& operator=(const StreamServer&) = delete;

    uint16_t port() const { return port_; }

    // Accepts one client, sends the header and then up to max_chunks chunks
    // (all when negative), and closes. Returns the number of messages sent.
    int serve_once(const std::vector<uint8_t>& stream, int max_chunks = -1);

private:
    int listen_fd_ = -1;
    uint16_t port_ = 0;
};

struct FetchResult {
    std::vector<uint8_t> bytes;  // header plus every fully received chunk
    int stages_received = 0;
    bool truncated = false;  // connection ended before k_max chunks arrived
};

// Connects, reads the header, then decodes after every received chunk and
// hands the growing prefix net to on_chunk. Stops after k_max chunks
// (negative = until the server closes). A connection that ends early still
// yields every fully received stage.
FetchResult fetch(const std::string& host, uint16_t port, int k_max,
                  const std::function<void(int stage, const StreamableNet& net)>& on_chunk);

}  // namespace snf

#include "snf/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "snf/stream_codec.hpp"

namespace snf {

namespace {

constexpr int kTimeoutMs = 10000;

[[noreturn]] void fail(const std::string& what) {
    throw IoError(what + ": " + std::strerror(errno));
}

void send_all(int fd, const uint8_t* data, size_t len) {
    while (len > 0) {
        const ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("send");
        }
        data += size_t(n);
        len -= size_t(n);
    }
}

void send_message(int fd, const uint8_t* data, size_t len) {
    uint8_t prefix[8];
    for (int i = 0; i < 8; ++i) prefix[i] = uint8_t(uint64_t(len) >> (8 * i));
    send_all(fd, prefix, 8);
    send_all(fd, data, len);
}

// Reads exactly len bytes. Returns bytes read; short only on EOF.
size_t recv_upto(int fd, uint8_t* data, size_t len) {
    size_t got = 0;
    while (got < len) {
        const ssize_t n = ::recv(fd, data + got, len - got, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK) throw IoError("fetch timed out");
            fail("recv");
        }
        if (n == 0) break;
        got += size_t(n);
    }
    return got;
}

void set_recv_timeout(int fd) {
    timeval tv{kTimeoutMs / 1000, (kTimeoutMs % 1000) * 1000};
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
}

}  // namespace

StreamServer::StreamServer(uint16_t port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) fail("socket");
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) fail("bind");
    if (::listen(listen_fd_, 1) < 0) fail("listen");
    socklen_t len = sizeof addr;
    if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0)
        fail("getsockname");
    port_ = ntohs(addr.sin_port);
}

StreamServer::~StreamServer() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

int StreamServer::serve_once(const std::vector<uint8_t>& stream, int max_chunks) {
    const auto spans = stream_messages(stream);
    size_t count = spans.size();
    if (max_chunks >= 0) count = std::min(count, size_t(max_chunks) + 1);

    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, kTimeoutMs);
    if (ready < 0) fail("poll");
    if (ready == 0) throw IoError("serve: no client connected within timeout");
    const int client = ::accept(listen_fd_, nullptr, nullptr);
    if (client < 0) fail("accept");
    const int one = 1;
    ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);

    int sent = 0;
    try {
        for (size_t i = 0; i < count; ++i) {
            send_message(client, stream.data() + spans[i].first, spans[i].second);
            ++sent;
        }
    } catch (...) {
        ::close(client);
        throw;
    }
    ::close(client);
    return sent;
}

FetchResult fetch(const std::string& host, uint16_t port, int k_max,
                  const std::function<void(int stage, const StreamableNet& net)>& on_chunk) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw IoError("cannot resolve " + host + ": " + gai_strerror(rc));

    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw IoError("cannot connect to " + host + ":" + std::to_string(port));
    set_recv_timeout(fd);

    FetchResult result;
    try {
        // A message is a u64 length then that many bytes; EOF at a message
        // boundary ends the stream, EOF inside a message is a truncation.
        auto read_message = [&](std::vector<uint8_t>& out) -> int {
            uint8_t prefix[8];
            const size_t got = recv_upto(fd, prefix, 8);
            if (got == 0) return 0;
            if (got < 8) return -1;
            uint64_t len = 0;
            for (int i = 0; i < 8; ++i) len |= uint64_t(prefix[i]) << (8 * i);
            if (len > (uint64_t(1) << 32)) throw IoError("fetch: oversized message");
            const size_t start = out.size();
            out.resize(start + size_t(len));
            if (recv_upto(fd, out.data() + start, size_t(len)) < size_t(len)) {
                out.resize(start);
                return -1;
            }
            return 1;
        };

        if (read_message(result.bytes) != 1) throw IoError("fetch: no stream header received");
        const StreamInfo info = read_stream_info(result.bytes);
        const int want = k_max < 0 ? info.stages : std::min(k_max, info.stages);

        while (result.stages_received < want) {
            const int st = read_message(result.bytes);
            if (st != 1) {
                result.truncated = true;
                break;
            }
            ++result.stages_received;
            if (on_chunk) {
                const StreamableNet net = decode_prefix(result.bytes, result.stages_received);
                on_chunk(result.stages_received, net);
            }
        }
    } catch (...) {
        ::close(fd);
        throw;
    }
    ::close(fd);
    return result;
}

}  // namespace snf

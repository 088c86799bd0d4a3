#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snf/net.hpp"

namespace snf {

// Value-range metadata carried in the stream header so a receiver can map
// network outputs back to raw signal values.
struct StreamMeta {
    double value_offset = 0.0;
    double value_scale = 1.0;
};

struct StreamInfo {
    uint16_t version = 0;
    int in_dim = 0, out_dim = 0, depth = 0, stages = 0;
    bool f32 = false;
    double omega0 = 0.0;
    StreamMeta meta;
    std::vector<int> widths;
    size_t header_bytes = 0;
};

uint32_t crc32(const uint8_t* data, size_t len);

// Layout (all integers little-endian):
//   header: magic "SNF1", version u16, in u16, out u16, depth u16, K u16,
//           flags u16 (bit 0: f32 payloads), omega0 f64, value_offset f64,
//           value_scale f64, widths K x u32
//   chunk:  stage u16, payload_len u64, payload, crc32(payload) u32
// A chunk payload holds the stage's blocks in stage_keys order, row-major.
// f64 payloads round-trip bit-exactly; the f32 mode is lossy.
std::vector<uint8_t> pack(const StreamableNet& net, const StreamMeta& meta, bool f32 = false);

StreamInfo read_stream_info(const std::vector<uint8_t>& bytes);

// Rebuilds the k-stage prefix net. Chunks beyond k may be absent or corrupt;
// the prefix decodes regardless. The result has frozen_stages == k-1, the
// state a progressively trained net is in while stage k trains.
StreamableNet decode_prefix(const std::vector<uint8_t>& bytes, int k, StreamMeta* meta = nullptr,
                            bool* f32 = nullptr);

// (offset, length) of each transport message: the header, then one per chunk.
std::vector<std::pair<size_t, size_t>> stream_messages(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> read_stream_file(const std::string& path);
void write_stream_file(const std::string& path, const std::vector<uint8_t>& bytes);

}  // namespace snf

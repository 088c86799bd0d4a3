#include "snf/stream_codec.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace snf {

uint32_t crc32(const uint8_t* data, size_t len) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int b = 0; b < 8; ++b) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

namespace {

void put_u16(std::vector<uint8_t>& v, uint16_t x) {
    v.push_back(uint8_t(x));
    v.push_back(uint8_t(x >> 8));
}

void put_u32(std::vector<uint8_t>& v, uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(uint8_t(x >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& v, uint64_t x) {
    for (int i = 0; i < 8; ++i) v.push_back(uint8_t(x >> (8 * i)));
}

void put_f64(std::vector<uint8_t>& v, double d) {
    uint64_t u;
    std::memcpy(&u, &d, 8);
    put_u64(v, u);
}

void put_f32(std::vector<uint8_t>& v, float f) {
    uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32(v, u);
}

struct Reader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;
    int chunk = 0;  // 0 while in the header

    void need(size_t n, const char* what) {
        if (buf.size() - pos < n)
            throw DecodeError(std::string("truncated ") + what +
                                  (chunk ? " in chunk " + std::to_string(chunk) : ""),
                              chunk);
    }
    uint16_t u16(const char* what) {
        need(2, what);
        uint16_t x = uint16_t(buf[pos] | (buf[pos + 1] << 8));
        pos += 2;
        return x;
    }
    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x |= uint32_t(buf[pos + i]) << (8 * i);
        pos += 4;
        return x;
    }
    uint64_t u64(const char* what) {
        need(8, what);
        uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x |= uint64_t(buf[pos + i]) << (8 * i);
        pos += 8;
        return x;
    }
    double f64(const char* what) {
        uint64_t u = u64(what);
        double d;
        std::memcpy(&d, &u, 8);
        return d;
    }
};

double payload_f64(const uint8_t* p) {
    uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= uint64_t(p[i]) << (8 * i);
    double d;
    std::memcpy(&d, &u, 8);
    return d;
}

double payload_f32(const uint8_t* p) {
    uint32_t u = 0;
    for (int i = 0; i < 4; ++i) u |= uint32_t(p[i]) << (8 * i);
    float f;
    std::memcpy(&f, &u, 4);
    return double(f);
}

long stage_param_count(const StreamableNet& net, int stage) {
    long n = 0;
    for (const BlockKey& key : net.stage_keys(stage)) n += long(net.param(key).size());
    return n;
}

}  // namespace

std::vector<uint8_t> pack(const StreamableNet& net, const StreamMeta& meta, bool f32) {
    if (net.num_stages() < 1) throw ArgumentError("pack: net has no stages");
    std::vector<uint8_t> out;
    out.insert(out.end(), {'S', 'N', 'F', '1'});
    put_u16(out, 1);  // version
    put_u16(out, uint16_t(net.in_dim()));
    put_u16(out, uint16_t(net.out_dim()));
    put_u16(out, uint16_t(net.depth()));
    put_u16(out, uint16_t(net.num_stages()));
    put_u16(out, f32 ? 1 : 0);
    put_f64(out, net.omega0());
    put_f64(out, meta.value_offset);
    put_f64(out, meta.value_scale);
    for (int w : net.stage_widths()) put_u32(out, uint32_t(w));

    for (int s = 1; s <= net.num_stages(); ++s) {
        std::vector<uint8_t> payload;
        payload.reserve(size_t(stage_param_count(net, s)) * (f32 ? 4 : 8));
        for (const BlockKey& key : net.stage_keys(s)) {
            const Matrix& m = net.param(key);
            const double* d = m.data();
            for (size_t i = 0; i < m.size(); ++i)
                f32 ? put_f32(payload, float(d[i])) : put_f64(payload, d[i]);
        }
        put_u16(out, uint16_t(s));
        put_u64(out, payload.size());
        out.insert(out.end(), payload.begin(), payload.end());
        put_u32(out, crc32(payload.data(), payload.size()));
    }
    return out;
}

StreamInfo read_stream_info(const std::vector<uint8_t>& bytes) {
    Reader r{bytes};
    r.need(4, "magic");
    if (std::memcmp(bytes.data(), "SNF1", 4) != 0) throw DecodeError("bad magic (not an SNF1 stream)");
    r.pos = 4;
    StreamInfo info;
    info.version = r.u16("version");
    if (info.version != 1)
        throw DecodeError("unsupported stream version " + std::to_string(info.version));
    info.in_dim = r.u16("header");
    info.out_dim = r.u16("header");
    info.depth = r.u16("header");
    info.stages = r.u16("header");
    const uint16_t flags = r.u16("header");
    info.f32 = (flags & 1) != 0;
    info.omega0 = r.f64("header");
    info.meta.value_offset = r.f64("header");
    info.meta.value_scale = r.f64("header");
    if (info.stages < 1) throw DecodeError("stream declares no stages");
    for (int i = 0; i < info.stages; ++i) {
        const int w = int(r.u32("stage widths"));
        if (!info.widths.empty() && w <= info.widths.back())
            throw DecodeError("stage widths not strictly increasing");
        info.widths.push_back(w);
    }
    info.header_bytes = r.pos;
    return info;
}

StreamableNet decode_prefix(const std::vector<uint8_t>& bytes, int k, StreamMeta* meta,
                            bool* f32) {
    const StreamInfo info = read_stream_info(bytes);
    if (k < 1 || k > info.stages)
        throw DecodeError("requested stage " + std::to_string(k) + " of a stream with " +
                          std::to_string(info.stages) + " stages");
    if (meta) *meta = info.meta;
    if (f32) *f32 = info.f32;

    StreamableNet net =
        StreamableNet::empty_shell(info.in_dim, info.out_dim, info.depth, {info.omega0});
    Reader r{bytes};
    r.pos = info.header_bytes;
    for (int s = 1; s <= k; ++s) {
        r.chunk = s;
        const uint16_t stage = r.u16("chunk header");
        if (stage != s)
            throw DecodeError("chunk " + std::to_string(s) + " carries stage index " +
                                  std::to_string(stage),
                              s);
        const uint64_t len = r.u64("chunk header");
        if (len > bytes.size()) throw DecodeError("chunk " + std::to_string(s) + " length corrupt", s);
        r.need(size_t(len) + 4, "chunk payload");
        const uint8_t* payload = bytes.data() + r.pos;
        r.pos += len;
        const uint32_t stored = r.u32("chunk crc");
        if (crc32(payload, len) != stored)
            throw DecodeError("crc mismatch in chunk " + std::to_string(s), s);

        net.append_stage_storage(info.widths[size_t(s) - 1]);
        const size_t unit = info.f32 ? 4 : 8;
        if (len != size_t(stage_param_count(net, s)) * unit)
            throw DecodeError("chunk " + std::to_string(s) + " payload length mismatch", s);
        size_t off = 0;
        for (const BlockKey& key : net.stage_keys(s)) {
            Matrix& m = net.param(key);
            double* d = m.data();
            for (size_t i = 0; i < m.size(); ++i, off += unit)
                d[i] = info.f32 ? payload_f32(payload + off) : payload_f64(payload + off);
        }
    }
    net.set_frozen_stages(k - 1);
    return net;
}

std::vector<std::pair<size_t, size_t>> stream_messages(const std::vector<uint8_t>& bytes) {
    const StreamInfo info = read_stream_info(bytes);
    std::vector<std::pair<size_t, size_t>> spans;
    spans.emplace_back(0, info.header_bytes);
    Reader r{bytes};
    r.pos = info.header_bytes;
    for (int s = 1; s <= info.stages; ++s) {
        r.chunk = s;
        const size_t start = r.pos;
        r.u16("chunk header");
        const uint64_t len = r.u64("chunk header");
        if (len > bytes.size()) throw DecodeError("chunk " + std::to_string(s) + " length corrupt", s);
        r.need(size_t(len) + 4, "chunk payload");
        r.pos += size_t(len) + 4;
        spans.emplace_back(start, r.pos - start);
    }
    return spans;
}

std::vector<uint8_t> read_stream_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_stream_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace snf

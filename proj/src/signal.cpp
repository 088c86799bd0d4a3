#include "snf/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

namespace snf {

SinusoidSpec default_sinusoid_spec(Rng& rng, int samples) {
    SinusoidSpec spec;
    spec.samples = samples;
    for (int i = 1; i <= 10; ++i) {
        spec.freqs.push_back(5.0 * i);
        spec.phases.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    return spec;
}

double sinusoid_value(const SinusoidSpec& spec, double x01) {
    if (spec.freqs.size() != spec.phases.size())
        throw ArgumentError("sinusoid: frequency/phase lists differ in length");
    double v = 0.0;
    for (size_t i = 0; i < spec.freqs.size(); ++i)
        v += std::sin(2.0 * std::numbers::pi * spec.freqs[i] * x01 + spec.phases[i]);
    return v;
}

SampledSignal make_sinusoid_1d(const SinusoidSpec& spec, SampleMode mode, Rng& rng) {
    if (spec.freqs.empty()) throw ArgumentError("sinusoid: empty spec");
    if (spec.freqs.size() != spec.phases.size())
        throw ArgumentError("sinusoid: frequency/phase lists differ in length");
    if (spec.samples < 2) throw ArgumentError("sinusoid: need at least 2 samples");

    const int n = spec.samples;
    const double amp = double(spec.freqs.size());
    SampledSignal s;
    s.coords = Matrix(n, 1);
    s.values = Matrix(n, 1);
    s.grid_shape = {n};
    s.value_offset = 0.0;
    s.value_scale = amp;
    for (int j = 0; j < n; ++j) {
        const double x01 = mode == SampleMode::regular_grid ? (j + 0.5) / n : rng.uniform(0.0, 1.0);
        s.coords(j, 0) = 2.0 * x01 - 1.0;
        s.values(j, 0) = sinusoid_value(spec, x01) / amp;
    }
    return s;
}

namespace {

struct ByteReader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;

    bool eof() const { return pos >= buf.size(); }
    uint8_t peek() const { return buf[pos]; }

    void skip_space_and_comments() {
        while (!eof()) {
            const uint8_t c = buf[pos];
            if (c == '#') {
                while (!eof() && buf[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    }

    int read_int(const char* what) {
        skip_space_and_comments();
        const size_t start = pos;
        long v = 0;
        while (!eof() && buf[pos] >= '0' && buf[pos] <= '9') {
            v = v * 10 + (buf[pos] - '0');
            if (v > 1000000000) throw ParseError(std::string(what) + " out of range", long(start));
            ++pos;
        }
        if (pos == start) throw ParseError(std::string("expected ") + what, long(pos));
        return int(v);
    }
};

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<uint8_t> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return buf;
}

}  // namespace

SampledSignal load_image_grid(const std::string& path) {
    const std::vector<uint8_t> buf = read_file(path);
    ByteReader r{buf};

    if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '5' && buf[1] != '6'))
        throw ParseError("not a binary PGM/PPM (magic must be P5 or P6)", 0);
    const int channels = buf[1] == '6' ? 3 : 1;
    r.pos = 2;

    const int cols = r.read_int("width");
    const int rows = r.read_int("height");
    const long maxval_at = long(r.pos);
    const int maxval = r.read_int("maxval");
    if (cols < 1 || rows < 1) throw ParseError("image dimensions must be positive", 2);
    if (maxval != 255) throw ParseError("only maxval 255 is supported", maxval_at);
    if (r.eof() || !(r.peek() == ' ' || r.peek() == '\t' || r.peek() == '\r' || r.peek() == '\n'))
        throw ParseError("expected single whitespace after maxval", long(r.pos));
    ++r.pos;

    const size_t need = size_t(rows) * cols * channels;
    if (buf.size() - r.pos < need)
        throw ParseError("truncated pixel data", long(buf.size()));

    const int n = rows * cols;
    SampledSignal s;
    s.coords = Matrix(n, 2);
    s.values = Matrix(n, channels);
    s.grid_shape = {rows, cols};
    s.value_offset = 0.5;
    s.value_scale = 0.5;
    for (int row = 0; row < rows; ++row) {
        const double y = grid_coord(row, rows);
        for (int col = 0; col < cols; ++col) {
            const int i = row * cols + col;
            s.coords(i, 0) = grid_coord(col, cols);
            s.coords(i, 1) = y;
            for (int ch = 0; ch < channels; ++ch)
                s.values(i, ch) = buf[r.pos + size_t(i) * channels + ch] / 255.0 * 2.0 - 1.0;
        }
    }
    return s;
}

void write_image(const std::string& path, const Matrix& values01, int rows, int cols) {
    const int channels = values01.cols();
    if (channels != 1 && channels != 3)
        throw ArgumentError("write_image: values must have 1 or 3 channels");
    if (values01.rows() != rows * cols)
        throw ShapeError("write_image: sample count does not match grid shape");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << (channels == 3 ? "P6" : "P5") << "\n" << cols << " " << rows << "\n255\n";
    std::vector<uint8_t> bytes(size_t(rows) * cols * channels);
    const double* v = values01.data();
    for (size_t i = 0; i < bytes.size(); ++i) {
        const double c = std::clamp(v[i], 0.0, 1.0);
        bytes[i] = uint8_t(std::lround(c * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("failed writing " + path);
}

SampledSignal load_video_grid(const std::string& dir, int first_frame, int frame_count,
                              int planned_total) {
    if (frame_count < 1) throw ArgumentError("load_video_grid: frame_count must be >= 1");
    if (first_frame < 0) throw ArgumentError("load_video_grid: first_frame must be >= 0");
    if (planned_total < first_frame + frame_count)
        throw ArgumentError("load_video_grid: planned_total shorter than requested range");

    namespace fs = std::filesystem;
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file()) names.push_back(entry.path().string());
    if (ec) throw IoError("cannot read directory " + dir);
    std::sort(names.begin(), names.end());
    if (int(names.size()) < first_frame + frame_count)
        throw IoError("directory " + dir + " has " + std::to_string(names.size()) +
                      " frames, need " + std::to_string(first_frame + frame_count));

    SampledSignal out;
    for (int f = 0; f < frame_count; ++f) {
        const SampledSignal frame = load_image_grid(names[first_frame + f]);
        if (f == 0) {
            const int rows = frame.grid_shape[0], cols = frame.grid_shape[1];
            out.coords = Matrix(frame_count * rows * cols, 3);
            out.values = Matrix(frame_count * rows * cols, frame.channels());
            out.grid_shape = {frame_count, rows, cols};
            out.value_offset = frame.value_offset;
            out.value_scale = frame.value_scale;
        } else if (frame.grid_shape != std::vector<int>{out.grid_shape[1], out.grid_shape[2]} ||
                   frame.channels() != out.channels()) {
            throw ParseError("frame " + names[first_frame + f] + " differs in size from frame 0");
        }
        const double t = grid_coord(first_frame + f, planned_total);
        const int per_frame = frame.samples();
        for (int i = 0; i < per_frame; ++i) {
            const int j = f * per_frame + i;
            out.coords(j, 0) = t;
            out.coords(j, 1) = frame.coords(i, 0);
            out.coords(j, 2) = frame.coords(i, 1);
            for (int ch = 0; ch < frame.channels(); ++ch) out.values(j, ch) = frame.values(i, ch);
        }
    }
    return out;
}

int strip_boundary_col(int cols, int num_strips, int k) {
    return int(long(cols) * k / num_strips);
}

RegionMask partition_spatial(const SampledSignal& signal, int num_strips, int k) {
    if (signal.grid_shape.size() != 2)
        throw ArgumentError("partition_spatial: signal is not an {H,W} grid");
    if (num_strips < 1 || k < 1 || k > num_strips)
        throw ArgumentError("partition_spatial: strip index out of range");
    const int cols = signal.grid_shape[1];
    const int boundary = strip_boundary_col(cols, num_strips, k);
    RegionMask mask;
    mask.member.resize(size_t(signal.samples()));
    for (int i = 0; i < signal.samples(); ++i) mask.member[i] = (i % cols) < boundary ? 1 : 0;
    return mask;
}

}  // namespace snf

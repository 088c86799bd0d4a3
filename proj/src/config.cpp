#include "snf/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace snf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(long line, const std::string& msg) { throw ParseError(msg, line); }

long to_int(const std::string& v, long line, const char* key) {
    long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        bad(line, std::string(key) + ": expected an integer, got '" + v + "'");
    return x;
}

double to_double(const std::string& v, long line, const char* key) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        bad(line, std::string(key) + ": expected a number, got '" + v + "'");
    }
}

std::vector<int> to_int_list(const std::string& v, long line, const char* key) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(int(to_int(trim(item), line, key)));
    if (out.empty()) bad(line, std::string(key) + ": empty list");
    return out;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    long line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) bad(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) bad(line, "expected 'key = value'");

        if (key == "task") {
            if (val == "sinusoid") cfg.task = Task::sinusoid;
            else if (val == "image") cfg.task = Task::image;
            else if (val == "video") cfg.task = Task::video;
            else bad(line, "task must be sinusoid|image|video");
        } else if (key == "mode") {
            if (val == "progressive") cfg.mode = Mode::progressive;
            else if (val == "slimmable") cfg.mode = Mode::slimmable;
            else if (val == "individual") cfg.mode = Mode::individual;
            else bad(line, "mode must be progressive|slimmable|individual");
        } else if (key == "growing") {
            if (val == "spectral") cfg.growing = Growing::spectral;
            else if (val == "spatial") cfg.growing = Growing::spatial;
            else if (val == "temporal") cfg.growing = Growing::temporal;
            else bad(line, "growing must be spectral|spatial|temporal");
        } else if (key == "init_mode") {
            if (val == "zero") cfg.init_mode = InitMode::zero_new_blocks;
            else if (val == "siren") cfg.init_mode = InitMode::siren_new_blocks;
            else bad(line, "init_mode must be zero|siren");
        } else if (key == "sample_mode") {
            if (val == "regular") cfg.sample_mode = SampleMode::regular_grid;
            else if (val == "random") cfg.sample_mode = SampleMode::random_uniform;
            else bad(line, "sample_mode must be regular|random");
        } else if (key == "depth") {
            cfg.depth = int(to_int(val, line, "depth"));
        } else if (key == "widths") {
            cfg.widths = to_int_list(val, line, "widths");
        } else if (key == "epochs") {
            cfg.epochs = to_int_list(val, line, "epochs");
        } else if (key == "lr") {
            cfg.lr = to_double(val, line, "lr");
        } else if (key == "beta1") {
            cfg.beta1 = to_double(val, line, "beta1");
        } else if (key == "beta2") {
            cfg.beta2 = to_double(val, line, "beta2");
        } else if (key == "eps") {
            cfg.eps = to_double(val, line, "eps");
        } else if (key == "seed") {
            cfg.seed = uint64_t(to_int(val, line, "seed"));
        } else if (key == "omega0") {
            cfg.omega0 = to_double(val, line, "omega0");
        } else if (key == "image") {
            cfg.image = val;
        } else if (key == "frames_dir") {
            cfg.frames_dir = val;
        } else if (key == "samples") {
            cfg.samples = int(to_int(val, line, "samples"));
        } else if (key == "strips") {
            cfg.strips = int(to_int(val, line, "strips"));
        } else if (key == "frames_per_stage") {
            cfg.frames_per_stage = int(to_int(val, line, "frames_per_stage"));
        } else if (key == "total_frames") {
            cfg.total_frames = int(to_int(val, line, "total_frames"));
        } else if (key == "log_interval") {
            cfg.log_interval = int(to_int(val, line, "log_interval"));
        } else if (key == "batch_size") {
            cfg.batch_size = int(to_int(val, line, "batch_size"));
        } else {
            bad(line, "unknown key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str());
}

int stage_count(const RunConfig& cfg) { return int(cfg.widths.size()); }

void validate(const RunConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ParseError("config: " + msg); };
    if (cfg.widths.empty()) fail("widths is required");
    if (cfg.widths.size() != cfg.epochs.size()) fail("widths and epochs must have equal length");
    for (size_t i = 1; i < cfg.widths.size(); ++i)
        if (cfg.widths[i] <= cfg.widths[i - 1]) fail("widths must be strictly increasing");
    for (int w : cfg.widths)
        if (w < 1) fail("widths must be positive");
    for (int e : cfg.epochs)
        if (e < 1) fail("epochs must be positive");
    if (cfg.depth < 1) fail("depth must be >= 1");
    if (!(cfg.lr > 0)) fail("lr must be > 0");
    if (!(cfg.beta1 >= 0 && cfg.beta1 < 1)) fail("beta1 must be in [0,1)");
    if (!(cfg.beta2 >= 0 && cfg.beta2 < 1)) fail("beta2 must be in [0,1)");
    if (!(cfg.omega0 > 0)) fail("omega0 must be > 0");
    if (cfg.log_interval < 1) fail("log_interval must be >= 1");
    if (cfg.batch_size < 0) fail("batch_size must be >= 0");

    if (cfg.mode == Mode::individual && cfg.widths.size() != 1)
        fail("mode=individual takes exactly one width");
    if (cfg.mode == Mode::slimmable && cfg.growing != Growing::spectral)
        fail("mode=slimmable supports only spectral growing");

    switch (cfg.task) {
        case Task::sinusoid:
            if (cfg.samples < 2) fail("samples must be >= 2");
            if (cfg.growing != Growing::spectral) fail("task=sinusoid supports only spectral growing");
            break;
        case Task::image:
            if (cfg.image.empty()) fail("task=image requires image=<path>");
            if (cfg.growing == Growing::temporal) fail("temporal growing requires task=video");
            if (cfg.growing == Growing::spatial && cfg.strips != 0 &&
                cfg.strips != int(cfg.widths.size()))
                fail("strips must equal the stage count (or 0 for automatic)");
            break;
        case Task::video:
            if (cfg.frames_dir.empty()) fail("task=video requires frames_dir=<path>");
            if (cfg.growing == Growing::spatial) fail("spatial growing requires task=image");
            if (cfg.frames_per_stage < 1) fail("frames_per_stage must be >= 1");
            if (cfg.total_frames < 0) fail("total_frames must be >= 0");
            break;
    }
}

}  // namespace snf

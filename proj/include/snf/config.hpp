#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snf/net.hpp"
#include "snf/signal.hpp"

namespace snf {

enum class Task { sinusoid, image, video };
enum class Mode { progressive, slimmable, individual };
enum class Growing { spectral, spatial, temporal };

// One experiment recipe, parsed from a line-oriented `key = value` file.
// '#' starts a comment; unknown keys are rejected with the line number.
struct RunConfig {
    Task task = Task::sinusoid;
    Mode mode = Mode::progressive;
    Growing growing = Growing::spectral;
    int depth = 3;
    std::vector<int> widths;  // cumulative stage widths
    std::vector<int> epochs;  // per stage; slimmable runs max(epochs) joint epochs
    double lr = 1e-4;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    uint64_t seed = 1;
    double omega0 = 30.0;
    std::string image;       // task=image: PPM/PGM path
    std::string frames_dir;  // task=video: directory of PPM frames
    int samples = 256;       // task=sinusoid: sample count
    int strips = 0;          // spatial growing; 0 = one strip per stage
    int frames_per_stage = 4;
    int total_frames = 0;  // 0 = frames_per_stage * stage count
    InitMode init_mode = InitMode::zero_new_blocks;
    SampleMode sample_mode = SampleMode::regular_grid;
    int log_interval = 100;
    int batch_size = 0;
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig parse_run_config(const std::string& path);

// Cross-field checks (list lengths, mode/growing/task combinations, paths).
void validate(const RunConfig& cfg);

int stage_count(const RunConfig& cfg);

}  // namespace snf

#pragma once

#include <string>
#include <vector>

#include "snf/config.hpp"
#include "snf/metrics.hpp"
#include "snf/net.hpp"
#include "snf/signal.hpp"
#include "snf/stream_codec.hpp"
#include "snf/training.hpp"

namespace snf {

// 0 = quiet, 1 = info (default), 2 = debug; read once from SNF_LOG.
int log_level();
void log_info(const std::string& msg);

// Per-stage targets for a run. One shared signal for spectral and spatial
// growing; one nested prefix per stage for temporal growing. For sinusoid
// tasks the rng draws the phases (and random sample positions) — callers
// must pass a generator seeded identically to the fitting run to see the
// same target.
std::vector<SampledSignal> build_stage_signals(const RunConfig& cfg, Rng& rng);

GrowthPlan build_plan(const RunConfig& cfg, const std::vector<SampledSignal>& signals);

// Network output mapped from [-1,1] to [0,1]; not clamped.
Matrix reconstruct01(const StreamableNet& net, const Matrix& coords, int stage);

// Quality of the stage-k prefix against the stage-k extent of the target:
// the full signal for spectral growing, strips 1..k for spatial growing, the
// frame prefix for temporal growing. SSIM is reported for image grids at
// least 11 pixels wide (on the evaluated sub-rectangle for spatial growing).
StageRow eval_stage(const StreamableNet& net, const RunConfig& cfg,
                    const std::vector<SampledSignal>& signals, int stage);

struct RunResult {
    StreamableNet net;
    MetricsReport report;  // training series plus post-hoc stage rows
    std::vector<SampledSignal> stage_signals;
    StreamMeta meta;
};

// Executes the configured run. With write_artifacts, out_dir receives
// model.snf, metrics.csv (epoch series), report.csv (stage rows), and
// per-stage reconstructions (PPM for grids, CSV for 1D).
RunResult run_fit(const RunConfig& cfg, const std::string& out_dir, bool write_artifacts = true);

// Reconstruction dumps for one stage; returns the paths written.
std::vector<std::string> write_stage_reconstruction(const StreamableNet& net, const RunConfig& cfg,
                                                    const std::vector<SampledSignal>& signals,
                                                    int stage, const std::string& out_dir,
                                                    const std::string& prefix);

}  // namespace snf

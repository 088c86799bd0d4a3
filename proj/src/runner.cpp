#include "snf/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace snf {

int log_level() {
    static const int level = [] {
        const char* v = std::getenv("SNF_LOG");
        if (!v) return 1;
        const std::string s(v);
        if (s == "quiet" || s == "0") return 0;
        if (s == "debug" || s == "2") return 2;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << msg << "\n";
}

namespace {

int effective_strips(const RunConfig& cfg) {
    return cfg.strips > 0 ? cfg.strips : stage_count(cfg);
}

int planned_total_frames(const RunConfig& cfg) {
    return cfg.total_frames > 0 ? cfg.total_frames : cfg.frames_per_stage * stage_count(cfg);
}

}  // namespace

std::vector<SampledSignal> build_stage_signals(const RunConfig& cfg, Rng& rng) {
    switch (cfg.task) {
        case Task::sinusoid: {
            const SinusoidSpec spec = default_sinusoid_spec(rng, cfg.samples);
            return {make_sinusoid_1d(spec, cfg.sample_mode, rng)};
        }
        case Task::image:
            return {load_image_grid(cfg.image)};
        case Task::video: {
            const int total = planned_total_frames(cfg);
            std::vector<SampledSignal> out;
            for (int k = 1; k <= stage_count(cfg); ++k) {
                const int frames = std::min(k * cfg.frames_per_stage, total);
                out.push_back(load_video_grid(cfg.frames_dir, 0, frames, total));
            }
            return out;
        }
    }
    throw ArgumentError("unreachable task");
}

GrowthPlan build_plan(const RunConfig& cfg, const std::vector<SampledSignal>& signals) {
    GrowthPlan plan;
    plan.init = cfg.init_mode;
    for (int k = 1; k <= stage_count(cfg); ++k) {
        StageSpec spec;
        spec.target_width = cfg.widths[size_t(k) - 1];
        spec.epochs = cfg.epochs[size_t(k) - 1];
        switch (cfg.growing) {
            case Growing::spectral:
                spec.loss = LossSpec::full();
                spec.signal_index = 0;
                break;
            case Growing::spatial:
                spec.loss = LossSpec::masked(partition_spatial(signals[0], effective_strips(cfg), k));
                spec.signal_index = 0;
                break;
            case Growing::temporal:
                spec.loss = LossSpec::full();
                spec.signal_index = k - 1;
                break;
        }
        plan.stages.push_back(std::move(spec));
    }
    return plan;
}

Matrix reconstruct01(const StreamableNet& net, const Matrix& coords, int stage) {
    Matrix out = net.forward(coords, stage);
    double* d = out.data();
    for (size_t i = 0; i < out.size(); ++i) d[i] = (d[i] + 1.0) * 0.5;
    return out;
}

namespace {

Matrix to01(const Matrix& normalized) {
    Matrix out = normalized;
    double* d = out.data();
    for (size_t i = 0; i < out.size(); ++i) d[i] = (d[i] + 1.0) * 0.5;
    return out;
}

Matrix clamp01(const Matrix& m) {
    Matrix out = m;
    double* d = out.data();
    for (size_t i = 0; i < out.size(); ++i) d[i] = std::clamp(d[i], 0.0, 1.0);
    return out;
}

// Rows of a grid signal restricted to columns [0, keep_cols) of a {rows,cols}
// grid, preserving row-major order.
Matrix take_left_columns(const Matrix& values, int rows, int cols, int keep_cols) {
    Matrix out(rows * keep_cols, values.cols());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < keep_cols; ++c)
            for (int ch = 0; ch < values.cols(); ++ch)
                out(r * keep_cols + c, ch) = values(r * cols + c, ch);
    return out;
}

}  // namespace

StageRow eval_stage(const StreamableNet& net, const RunConfig& cfg,
                    const std::vector<SampledSignal>& signals, int stage) {
    if (stage < 1 || stage > net.num_stages())
        throw ArgumentError("eval: stage " + std::to_string(stage) + " out of range 1.." +
                            std::to_string(net.num_stages()));

    StageRow row;
    row.stage = stage;
    row.params = net.param_count(stage);

    const SampledSignal& target =
        cfg.growing == Growing::temporal ? signals[size_t(stage) - 1] : signals[0];
    const Matrix pred01 = reconstruct01(net, target.coords, stage);
    const Matrix target01 = to01(target.values);

    if (cfg.growing == Growing::spatial) {
        const int rows = target.grid_shape[0], cols = target.grid_shape[1];
        const int keep = strip_boundary_col(cols, effective_strips(cfg), stage);
        const Matrix p = take_left_columns(pred01, rows, cols, keep);
        const Matrix t = take_left_columns(target01, rows, cols, keep);
        row.mse = mse_mean(p, t);
        row.psnr = psnr_from_mse(row.mse);
        if (keep >= 11 && rows >= 11) row.ssim = ssim(clamp01(p), t, rows, keep);
    } else {
        row.mse = mse_mean(pred01, target01);
        row.psnr = psnr_from_mse(row.mse);
        if (cfg.task == Task::image) {
            const int rows = target.grid_shape[0], cols = target.grid_shape[1];
            if (rows >= 11 && cols >= 11) row.ssim = ssim(clamp01(pred01), target01, rows, cols);
        }
    }
    return row;
}

std::vector<std::string> write_stage_reconstruction(const StreamableNet& net, const RunConfig& cfg,
                                                    const std::vector<SampledSignal>& signals,
                                                    int stage, const std::string& out_dir,
                                                    const std::string& prefix) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    const SampledSignal& target =
        cfg.growing == Growing::temporal ? signals[size_t(stage) - 1] : signals[0];
    const Matrix pred01 = reconstruct01(net, target.coords, stage);

    switch (cfg.task) {
        case Task::sinusoid: {
            const std::string path =
                (fs::path(out_dir) / (prefix + "_stage_" + std::to_string(stage) + ".csv")).string();
            std::ofstream out(path);
            if (!out) throw IoError("cannot open " + path + " for writing");
            out << "x01,target_raw,pred_raw\n";
            for (int i = 0; i < target.samples(); ++i) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n",
                              (target.coords(i, 0) + 1.0) * 0.5,
                              target.value_offset + target.value_scale * target.values(i, 0),
                              target.value_offset + target.value_scale * (pred01(i, 0) * 2.0 - 1.0));
                out << buf;
            }
            written.push_back(path);
            break;
        }
        case Task::image: {
            const std::string path =
                (fs::path(out_dir) / (prefix + "_stage_" + std::to_string(stage) + ".ppm")).string();
            write_image(path, pred01, target.grid_shape[0], target.grid_shape[1]);
            written.push_back(path);
            break;
        }
        case Task::video: {
            const int frames = target.grid_shape[0];
            const int per_frame = target.grid_shape[1] * target.grid_shape[2];
            for (int f = 0; f < frames; ++f) {
                Matrix plane(per_frame, pred01.cols());
                for (int i = 0; i < per_frame; ++i)
                    for (int ch = 0; ch < pred01.cols(); ++ch)
                        plane(i, ch) = pred01(f * per_frame + i, ch);
                char name[64];
                std::snprintf(name, sizeof name, "%s_stage_%d_frame_%02d.ppm", prefix.c_str(),
                              stage, f);
                const std::string path = (fs::path(out_dir) / name).string();
                write_image(path, plane, target.grid_shape[1], target.grid_shape[2]);
                written.push_back(path);
            }
            break;
        }
    }
    return written;
}

RunResult run_fit(const RunConfig& cfg, const std::string& out_dir, bool write_artifacts) {
    Rng rng(cfg.seed);
    RunResult result;
    result.stage_signals = build_stage_signals(cfg, rng);
    const SampledSignal& first = result.stage_signals[0];
    result.meta = {first.value_offset, first.value_scale};

    TrainConfig tc;
    tc.lr = cfg.lr;
    tc.beta1 = cfg.beta1;
    tc.beta2 = cfg.beta2;
    tc.eps = cfg.eps;
    tc.log_interval = cfg.log_interval;
    tc.batch_size = cfg.batch_size;

    const ActivationConfig act{cfg.omega0};
    switch (cfg.mode) {
        case Mode::progressive: {
            const GrowthPlan plan = build_plan(cfg, result.stage_signals);
            result.net = StreamableNet(first.dims(), first.channels(), cfg.depth, cfg.widths[0],
                                       act, rng);
            result.report = train_progressive(result.net, result.stage_signals, plan, tc, rng);
            break;
        }
        case Mode::slimmable: {
            result.net = StreamableNet(first.dims(), first.channels(), cfg.depth, cfg.widths[0],
                                       act, rng);
            for (size_t i = 1; i < cfg.widths.size(); ++i)
                result.net.grow(cfg.widths[i], rng, InitMode::siren_new_blocks);
            result.net.set_frozen_stages(0);
            tc.epochs = *std::max_element(cfg.epochs.begin(), cfg.epochs.end());
            result.report = train_slimmable(result.net, first, tc);
            break;
        }
        case Mode::individual: {
            tc.epochs = cfg.epochs[0];
            auto [net, report] =
                train_individual(first, cfg.depth, cfg.widths[0], act, tc, rng);
            result.net = std::move(net);
            result.report = std::move(report);
            break;
        }
    }

    for (int k = 1; k <= result.net.num_stages(); ++k)
        result.report.stages.push_back(eval_stage(result.net, cfg, result.stage_signals, k));

    if (write_artifacts) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        const auto stream = pack(result.net, result.meta);
        write_stream_file((fs::path(out_dir) / "model.snf").string(), stream);
        write_series_csv((fs::path(out_dir) / "metrics.csv").string(), result.report);
        write_stage_csv((fs::path(out_dir) / "report.csv").string(), result.report);
        for (int k = 1; k <= result.net.num_stages(); ++k)
            write_stage_reconstruction(result.net, cfg, result.stage_signals, k, out_dir, "recon");
        log_info("fit: wrote model.snf, metrics.csv, report.csv and reconstructions to " + out_dir);
    }
    for (const StageRow& row : result.report.stages) {
        char line[160];
        std::snprintf(line, sizeof line, "stage %d: params %ld, mse %.6g, psnr %.2f dB%s",
                      row.stage, row.params, row.mse, capped_db(row.psnr),
                      row.ssim ? (", ssim " + std::to_string(*row.ssim)).c_str() : "");
        log_info(line);
    }
    return result;
}

}  // namespace snf

// snf: train, evaluate, stream and inspect width-streamable sine networks.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snf/config.hpp"
#include "snf/metrics.hpp"
#include "snf/runner.hpp"
#include "snf/signal.hpp"
#include "snf/stream_codec.hpp"
#include "snf/transport.hpp"

namespace fs = std::filesystem;
using namespace snf;

namespace {

struct CommonArgs {
    std::string model, config, out;
    int stage = 0;
};

void print_stage_row(const StageRow& row) {
    std::printf("stage %d: params %ld, mse %.10g, psnr %.4f dB", row.stage, row.params, row.mse,
                capped_db(row.psnr));
    if (row.ssim) std::printf(", ssim %.6f", *row.ssim);
    std::printf("\n");
}

// Rebuilds the run's target signals; the rng must replay the fit run's draws.
std::vector<SampledSignal> signals_for(const RunConfig& cfg) {
    Rng rng(cfg.seed);
    return build_stage_signals(cfg, rng);
}

int cmd_fit(const std::string& config, const std::string& out) {
    const RunConfig cfg = parse_run_config(config);
    const RunResult result = run_fit(cfg, out);
    for (const StageRow& row : result.report.stages) print_stage_row(row);
    return 0;
}

int cmd_eval(const CommonArgs& a) {
    const RunConfig cfg = parse_run_config(a.config);
    const auto bytes = read_stream_file(a.model);
    const StreamableNet net = decode_prefix(bytes, a.stage);
    const auto signals = signals_for(cfg);
    const StageRow row = eval_stage(net, cfg, signals, a.stage);
    print_stage_row(row);
    if (!a.out.empty()) {
        MetricsReport report;
        report.stages.push_back(row);
        write_stage_csv(a.out, report);
    }
    return 0;
}

int cmd_residual(const CommonArgs& a) {
    const RunConfig cfg = parse_run_config(a.config);
    if (a.stage < 2)
        throw ArgumentError("residual: stage must be >= 2 (stage 1 is the base reconstruction)");
    const auto bytes = read_stream_file(a.model);
    const StreamableNet net = decode_prefix(bytes, a.stage);
    const auto signals = signals_for(cfg);
    const SampledSignal& target =
        cfg.growing == Growing::temporal ? signals[size_t(a.stage) - 1] : signals[0];
    const Matrix res = net.forward_residual(target.coords, a.stage);

    fs::create_directories(a.out);
    if (cfg.task == Task::sinusoid) {
        const std::string path =
            (fs::path(a.out) / ("residual_stage_" + std::to_string(a.stage) + ".csv")).string();
        std::ofstream f(path);
        if (!f) throw IoError("cannot open " + path + " for writing");
        f << "x01,residual_raw\n";
        for (int i = 0; i < target.samples(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", (target.coords(i, 0) + 1.0) * 0.5,
                          target.value_scale * res(i, 0));
            f << buf;
        }
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }
    // Residuals are signed; images show 0.5 + res/2 so zero residual is gray.
    Matrix viz = res;
    for (size_t i = 0; i < viz.size(); ++i) viz.data()[i] = 0.5 + 0.5 * viz.data()[i];
    if (cfg.task == Task::image) {
        const std::string path =
            (fs::path(a.out) / ("residual_stage_" + std::to_string(a.stage) + ".ppm")).string();
        write_image(path, viz, target.grid_shape[0], target.grid_shape[1]);
        std::printf("wrote %s\n", path.c_str());
    } else {
        const int frames = target.grid_shape[0];
        const int per_frame = target.grid_shape[1] * target.grid_shape[2];
        for (int f = 0; f < frames; ++f) {
            Matrix plane(per_frame, viz.cols());
            for (int i = 0; i < per_frame; ++i)
                for (int ch = 0; ch < viz.cols(); ++ch) plane(i, ch) = viz(f * per_frame + i, ch);
            char name[48];
            std::snprintf(name, sizeof name, "residual_stage_%d_frame_%02d.ppm", a.stage, f);
            write_image((fs::path(a.out) / name).string(), plane, target.grid_shape[1],
                        target.grid_shape[2]);
        }
        std::printf("wrote %d residual frames to %s\n", frames, a.out.c_str());
    }
    return 0;
}

int cmd_pack(const std::string& model, const std::string& out, bool f32) {
    const auto bytes = read_stream_file(model);
    const StreamInfo info = read_stream_info(bytes);
    StreamMeta meta;
    const StreamableNet net = decode_prefix(bytes, info.stages, &meta);
    write_stream_file(out, pack(net, meta, f32));
    std::printf("wrote %s (%d stages, %s payload)\n", out.c_str(), info.stages,
                f32 ? "f32" : "f64");
    return 0;
}

int cmd_decode(const std::string& in, int stage, const std::string& out) {
    const auto bytes = read_stream_file(in);
    StreamMeta meta;
    const StreamableNet net = decode_prefix(bytes, stage, &meta);
    if (!out.empty()) write_stream_file(out, pack(net, meta));
    std::printf("decoded %d stage(s): in_dim %d, out_dim %d, depth %d, widths", stage,
                net.in_dim(), net.out_dim(), net.depth());
    for (int w : net.stage_widths()) std::printf(" %d", w);
    std::printf(", params %ld\n", net.param_count(net.num_stages()));
    if (!out.empty()) std::printf("wrote %s\n", out.c_str());
    return 0;
}

int cmd_serve(const std::string& stream_path, uint16_t port, int max_chunks) {
    const auto bytes = read_stream_file(stream_path);
    StreamServer server(port);
    std::printf("serving %s on port %u\n", stream_path.c_str(), unsigned(server.port()));
    std::fflush(stdout);
    const int sent = server.serve_once(bytes, max_chunks);
    std::printf("sent %d message(s)\n", sent);
    return 0;
}

int cmd_fetch(const std::string& host, uint16_t port, int k_max, const std::string& out,
              const std::string& config) {
    fs::create_directories(out);
    RunConfig cfg;
    std::vector<SampledSignal> signals;
    const bool have_cfg = !config.empty();
    if (have_cfg) {
        cfg = parse_run_config(config);
        signals = signals_for(cfg);
    }

    const FetchResult result = fetch(host, port, k_max, [&](int stage, const StreamableNet& net) {
        if (!have_cfg) {
            std::printf("received stage %d (widths up to %d)\n", stage, net.width(stage));
            return;
        }
        const StageRow row = eval_stage(net, cfg, signals, stage);
        print_stage_row(row);
        write_stage_reconstruction(net, cfg, signals, stage, out, "fetched");
    });

    write_stream_file((fs::path(out) / "fetched.snf").string(), result.bytes);
    std::printf("fetched %d stage(s)%s\n", result.stages_received,
                result.truncated ? " (stream truncated)" : "");
    return 0;
}

int cmd_spectrum(const CommonArgs& a, bool residual) {
    const RunConfig cfg = parse_run_config(a.config);
    const auto bytes = read_stream_file(a.model);
    const StreamableNet net = decode_prefix(bytes, a.stage);

    if (cfg.task == Task::sinusoid) {
        // Evaluate on the regular cell-center grid regardless of how the
        // model was trained; the DFT needs equal spacing.
        const int n = cfg.samples;
        Matrix coords(n, 1);
        for (int j = 0; j < n; ++j) coords(j, 0) = grid_coord(j, n);
        if (residual && a.stage < 2) throw ArgumentError("spectrum: residual needs stage >= 2");
        const Matrix y = residual ? net.forward_residual(coords, a.stage)
                                  : net.forward(coords, a.stage);
        std::vector<double> v(static_cast<size_t>(n), 0.0);
        for (int j = 0; j < n; ++j) v[size_t(j)] = y(j, 0);
        const auto mags = dft_1d(v);
        std::ofstream f(a.out);
        if (!f) throw IoError("cannot open " + a.out + " for writing");
        f << "bin,magnitude\n";
        for (size_t k = 0; k < mags.size(); ++k) f << k << "," << mags[k] << "\n";
        std::printf("spectral centroid: %.6f\n", spectral_centroid(mags));
        return 0;
    }
    if (cfg.task != Task::image) throw ArgumentError("spectrum: supported for sinusoid and image");
    const auto signals = signals_for(cfg);
    const SampledSignal& target = signals[0];
    if (residual) throw ArgumentError("spectrum: --residual is for 1D models");
    const Matrix pred01 = reconstruct01(net, target.coords, a.stage);
    const int rows = target.grid_shape[0], cols = target.grid_shape[1];
    Matrix plane(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double lum = 0.0;
            for (int ch = 0; ch < pred01.cols(); ++ch) lum += pred01(r * cols + c, ch);
            plane(r, c) = lum / pred01.cols();
        }
    const auto profile = radial_profile(spectrum_2d(plane));
    std::ofstream f(a.out);
    if (!f) throw IoError("cannot open " + a.out + " for writing");
    f << "radius,magnitude\n";
    for (size_t r = 0; r < profile.size(); ++r) f << r << "," << profile[r] << "\n";
    std::printf("wrote %s\n", a.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streamable sine-network fields: fit, evaluate and stream width-growable models"};
    app.require_subcommand(1);

    std::string config, out = ".", model, host = "127.0.0.1", stream_path;
    int stage = 0, max_chunks = -1, k_max = -1;
    uint16_t port = 0;
    bool f32 = false, residual = false;

    auto* fit = app.add_subcommand("fit", "train a model from a config file");
    fit->add_option("--config", config, "run config path")->required();
    fit->add_option("--out", out, "output directory");

    auto* eval = app.add_subcommand("eval", "evaluate a stage prefix of a model");
    eval->add_option("--model", model, "model.snf path")->required();
    eval->add_option("--config", config, "run config path")->required();
    eval->add_option("--stage", stage, "stage prefix to evaluate")->required();
    eval->add_option("--out", out, "optional CSV path")->default_val("");

    auto* res = app.add_subcommand("residual", "dump one stage's residual contribution");
    res->add_option("--model", model)->required();
    res->add_option("--config", config)->required();
    res->add_option("--stage", stage, "stage >= 2")->required();
    res->add_option("--out", out, "output directory");

    auto* pk = app.add_subcommand("pack", "rewrite a stream (optionally with f32 payloads)");
    pk->add_option("--model", model, "input .snf")->required();
    pk->add_option("--out", out, "output .snf")->required();
    pk->add_flag("--f32", f32, "lossy 32-bit payloads");

    auto* dec = app.add_subcommand("decode", "decode a stage prefix, print a summary");
    dec->add_option("--in", model, "input .snf")->required();
    dec->add_option("--stage", stage, "prefix length")->required();
    dec->add_option("--out", out, "optional re-packed prefix .snf")->default_val("");

    auto* srv = app.add_subcommand("serve", "send a stream to one TCP client");
    srv->add_option("--stream", stream_path, "packed .snf path")->required();
    srv->add_option("--port", port, "listen port (0 = ephemeral)");
    srv->add_option("--max-chunks", max_chunks, "stop after this many chunks");

    auto* ft = app.add_subcommand("fetch", "receive a stream, decoding after every chunk");
    ft->add_option("--host", host);
    ft->add_option("--port", port)->required();
    ft->add_option("--k-max", k_max, "stop after this many chunks");
    ft->add_option("--out", out, "output directory");
    ft->add_option("--config", config, "run config for per-stage reconstructions")->default_val("");

    auto* spec = app.add_subcommand("spectrum", "DFT summary of a reconstruction");
    spec->add_option("--model", model)->required();
    spec->add_option("--config", config)->required();
    spec->add_option("--stage", stage)->required();
    spec->add_option("--out", out, "CSV path")->required();
    spec->add_flag("--residual", residual, "spectrum of the stage residual (1D)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const CommonArgs a{model, config, out, stage};
        if (fit->parsed()) return cmd_fit(config, out);
        if (eval->parsed()) return cmd_eval(a);
        if (res->parsed()) return cmd_residual(a);
        if (pk->parsed()) return cmd_pack(model, out, f32);
        if (dec->parsed()) return cmd_decode(model, stage, out);
        if (srv->parsed()) return cmd_serve(stream_path, port, max_chunks);
        if (ft->parsed()) return cmd_fetch(host, port, k_max, out, config);
        if (spec->parsed()) return cmd_spectrum(a, residual);
    } catch (const DivergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what();
        if (e.where >= 0) std::cerr << " (line/offset " << e.where << ")";
        std::cerr << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

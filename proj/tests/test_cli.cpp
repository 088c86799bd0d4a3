#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& stdout_file = {}) {
    std::string cmd = std::string(SNF_CLI_PATH) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<char> slurp_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(f), {});
}

struct CliFixture {
    fs::path dir = support::temp_dir("cli");
    fs::path cfg = dir / "run.cfg";
    fs::path out = dir / "run";

    CliFixture() {
        std::ofstream f(cfg);
        f << "task = sinusoid\n"
             "widths = 4, 8\n"
             "epochs = 30, 30\n"
             "samples = 64\n"
             "depth = 2\n"
             "lr = 1e-3\n"
             "seed = 3\n"
             "log_interval = 10\n";
    }
    ~CliFixture() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

}  // namespace

TEST_CASE("fit writes the run artifacts and reruns bit-identically") {
    CliFixture fx;
    const fs::path log = fx.dir / "fit.log";
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(), log) == 0);
    for (const char* name :
         {"model.snf", "metrics.csv", "report.csv", "recon_stage_1.csv", "recon_stage_2.csv"})
        CHECK(fs::exists(fx.out / name));
    const std::string printed = slurp(log);
    CHECK(printed.find("stage 1:") != std::string::npos);
    CHECK(printed.find("stage 2:") != std::string::npos);

    const fs::path out2 = fx.dir / "run2";
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + out2.string(), log) == 0);
    CHECK(slurp_bytes(fx.out / "model.snf") == slurp_bytes(out2 / "model.snf"));
    CHECK(slurp(fx.out / "report.csv") == slurp(out2 / "report.csv"));
}

TEST_CASE("eval reports the same numbers the fit run recorded") {
    CliFixture fx;
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(),
                    fx.dir / "fit.log") == 0);
    const fs::path csv = fx.dir / "eval.csv";
    REQUIRE(run_cli("eval --model " + (fx.out / "model.snf").string() + " --config " +
                        fx.cfg.string() + " --stage 2 --out " + csv.string(),
                    fx.dir / "eval.log") == 0);
    // report.csv row for stage 2 equals the eval output row.
    std::istringstream report(slurp(fx.out / "report.csv"));
    std::string header, row1, row2;
    REQUIRE(std::getline(report, header));
    REQUIRE(std::getline(report, row1));
    REQUIRE(std::getline(report, row2));
    std::istringstream evalcsv(slurp(csv));
    std::string eheader, erow;
    REQUIRE(std::getline(evalcsv, eheader));
    REQUIRE(std::getline(evalcsv, erow));
    CHECK(eheader == header);
    CHECK(erow == row2);
}

TEST_CASE("decode prints the prefix summary and repacks it") {
    CliFixture fx;
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(),
                    fx.dir / "fit.log") == 0);
    const fs::path log = fx.dir / "decode.log";
    const fs::path prefix = fx.dir / "prefix.snf";
    REQUIRE(run_cli("decode --in " + (fx.out / "model.snf").string() + " --stage 1 --out " +
                        prefix.string(),
                    log) == 0);
    CHECK(slurp(log).find("decoded 1 stage(s)") != std::string::npos);
    REQUIRE(fs::exists(prefix));
    // The repacked prefix is a valid 1-stage stream; asking for stage 2 fails.
    CHECK(run_cli("decode --in " + prefix.string() + " --stage 1", fx.dir / "d2.log") == 0);
    CHECK(run_cli("decode --in " + prefix.string() + " --stage 2", fx.dir / "d3.log") == 4);
}

TEST_CASE("pack rewrites streams, optionally quantized") {
    CliFixture fx;
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(),
                    fx.dir / "fit.log") == 0);
    const fs::path copy = fx.dir / "copy.snf";
    REQUIRE(run_cli("pack --model " + (fx.out / "model.snf").string() + " --out " + copy.string(),
                    fx.dir / "pack.log") == 0);
    CHECK(slurp_bytes(copy) == slurp_bytes(fx.out / "model.snf"));

    const fs::path small = fx.dir / "small.snf";
    REQUIRE(run_cli("pack --model " + (fx.out / "model.snf").string() + " --out " +
                        small.string() + " --f32",
                    fx.dir / "pack32.log") == 0);
    CHECK(fs::file_size(small) < fs::file_size(copy));
}

TEST_CASE("residual rejects the base stage and writes later ones") {
    CliFixture fx;
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(),
                    fx.dir / "fit.log") == 0);
    const std::string common = "residual --model " + (fx.out / "model.snf").string() +
                               " --config " + fx.cfg.string() + " --out " + fx.dir.string();
    CHECK(run_cli(common + " --stage 1", fx.dir / "r1.log") == 2);
    REQUIRE(run_cli(common + " --stage 2", fx.dir / "r2.log") == 0);
    const std::string csv = slurp(fx.dir / "residual_stage_2.csv");
    CHECK(csv.substr(0, 17) == "x01,residual_raw\n");
}

TEST_CASE("spectrum writes bin magnitudes and prints the centroid") {
    CliFixture fx;
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(),
                    fx.dir / "fit.log") == 0);
    const fs::path csv = fx.dir / "spec.csv";
    const fs::path log = fx.dir / "spec.log";
    REQUIRE(run_cli("spectrum --model " + (fx.out / "model.snf").string() + " --config " +
                        fx.cfg.string() + " --stage 2 --out " + csv.string(),
                    log) == 0);
    CHECK(slurp(log).find("spectral centroid:") != std::string::npos);
    std::istringstream lines(slurp(csv));
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "bin,magnitude");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 33);  // bins 0..32 of a 64-sample grid
}

TEST_CASE("serve and fetch hand a stream across loopback") {
    CliFixture fx;
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(),
                    fx.dir / "fit.log") == 0);
    const uint16_t port = uint16_t(21000 + ::getpid() % 20000);
    const fs::path fetched_dir = fx.dir / "fetched";
    const std::string cmd = "sh -c '" + std::string(SNF_CLI_PATH) + " serve --stream " +
                            (fx.out / "model.snf").string() + " --port " + std::to_string(port) +
                            " > " + (fx.dir / "serve.log").string() + " 2>&1 & sleep 0.2; " +
                            std::string(SNF_CLI_PATH) + " fetch --port " + std::to_string(port) +
                            " --out " + fetched_dir.string() + " > " +
                            (fx.dir / "fetch.log").string() + " 2>&1'";
    const int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    REQUIRE(WEXITSTATUS(rc) == 0);
    CHECK(slurp_bytes(fetched_dir / "fetched.snf") == slurp_bytes(fx.out / "model.snf"));
    const std::string fetch_log = slurp(fx.dir / "fetch.log");
    CHECK(fetch_log.find("received stage 1") != std::string::npos);
    CHECK(fetch_log.find("received stage 2") != std::string::npos);
    CHECK(fetch_log.find("fetched 2 stage(s)") != std::string::npos);
    CHECK(fetch_log.find("truncated") == std::string::npos);
}

TEST_CASE("error paths use distinct exit codes") {
    CliFixture fx;
    const fs::path bad_cfg = fx.dir / "bad.cfg";
    std::ofstream(bad_cfg) << "widths = 8, 4\nepochs = 1, 1\n";
    CHECK(run_cli("fit --config " + bad_cfg.string(), fx.dir / "e1.log") == 2);
    CHECK(run_cli("fit --config " + (fx.dir / "missing.cfg").string(), fx.dir / "e2.log") == 4);
    CHECK(run_cli("decode --in " + (fx.dir / "missing.snf").string() + " --stage 1",
                  fx.dir / "e3.log") == 4);
    CHECK(run_cli("fit", fx.dir / "e4.log") == 2);          // missing required option
    CHECK(run_cli("frobnicate", fx.dir / "e5.log") == 2);   // unknown subcommand
    CHECK(run_cli("--help", fx.dir / "e6.log") == 0);

    // A corrupted stream surfaces as a decode failure (exit 4).
    REQUIRE(run_cli("fit --config " + fx.cfg.string() + " --out " + fx.out.string(),
                    fx.dir / "fit.log") == 0);
    auto bytes = slurp_bytes(fx.out / "model.snf");
    bytes[bytes.size() - 10] ^= 0x01;
    std::ofstream(fx.dir / "corrupt.snf", std::ios::binary)
        .write(bytes.data(), std::streamsize(bytes.size()));
    CHECK(run_cli("decode --in " + (fx.dir / "corrupt.snf").string() + " --stage 2",
                  fx.dir / "e7.log") == 4);
}

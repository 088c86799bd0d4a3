// Shared helpers for the test suites: independent reference implementations
// (dense MLP, scalar Adam, windowed SSIM), finite differences, digests and
// throwaway fixtures.
#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "snf/loss.hpp"
#include "snf/matrix.hpp"
#include "snf/net.hpp"
#include "snf/rng.hpp"
#include "snf/signal.hpp"

namespace support {

// Straight-line dense MLP equivalent to a stage prefix: every block pasted
// into one weight matrix per layer, absent (new-to-old) blocks as zeros,
// evaluated with naive per-sample loops.
struct DenseNet {
    std::vector<snf::Matrix> weights;  // layer 0..depth-1
    std::vector<snf::Matrix> biases;
    snf::Matrix output;
    double omega0 = 30.0;

    snf::Matrix forward(const snf::Matrix& coords) const {
        const int n = coords.rows();
        std::vector<double> act;
        snf::Matrix out(n, output.rows());
        for (int s = 0; s < n; ++s) {
            act.assign(size_t(weights[0].rows()), 0.0);
            for (int u = 0; u < weights[0].rows(); ++u) {
                double z = biases[0](u, 0);
                for (int j = 0; j < coords.cols(); ++j) z += weights[0](u, j) * coords(s, j);
                act[size_t(u)] = std::sin(omega0 * z);
            }
            for (size_t l = 1; l < weights.size(); ++l) {
                std::vector<double> next(size_t(weights[l].rows()), 0.0);
                for (int u = 0; u < weights[l].rows(); ++u) {
                    double z = biases[l](u, 0);
                    for (int j = 0; j < weights[l].cols(); ++j) z += weights[l](u, j) * act[size_t(j)];
                    next[size_t(u)] = std::sin(z);
                }
                act = std::move(next);
            }
            for (int o = 0; o < output.rows(); ++o) {
                double y = 0.0;
                for (int j = 0; j < output.cols(); ++j) y += output(o, j) * act[size_t(j)];
                out(s, o) = y;
            }
        }
        return out;
    }
};

inline DenseNet flatten(const snf::StreamableNet& net, int stage) {
    const int w = net.width(stage);
    DenseNet dense;
    dense.omega0 = net.omega0();
    dense.weights.emplace_back(w, net.in_dim());
    dense.biases.emplace_back(w, 1);
    for (int l = 1; l < net.depth(); ++l) {
        dense.weights.emplace_back(w, w);
        dense.biases.emplace_back(w, 1);
    }
    dense.output = snf::Matrix(net.out_dim(), w);

    auto row0 = [&](int s) { return s == 1 ? 0 : net.width(s - 1); };
    for (int s = 1; s <= stage; ++s) {
        const int r0 = row0(s);
        const snf::Matrix& fw = net.first_weight(s);
        for (int r = 0; r < fw.rows(); ++r)
            for (int c = 0; c < fw.cols(); ++c) dense.weights[0](r0 + r, c) = fw(r, c);
        for (int l = 0; l < net.depth(); ++l) {
            const snf::Matrix& b = net.bias(l, s);
            for (int r = 0; r < b.rows(); ++r) dense.biases[size_t(l)](r0 + r, 0) = b(r, 0);
        }
        for (int l = 1; l < net.depth(); ++l)
            for (int j = 1; j <= s; ++j) {
                const int c0 = row0(j);
                const snf::Matrix& blk = net.hidden_weight(l, s, j);
                for (int r = 0; r < blk.rows(); ++r)
                    for (int c = 0; c < blk.cols(); ++c)
                        dense.weights[size_t(l)](r0 + r, c0 + c) = blk(r, c);
            }
        const snf::Matrix& ow = net.output_weight(s);
        for (int r = 0; r < ow.rows(); ++r)
            for (int c = 0; c < ow.cols(); ++c) dense.output(r, r0 + c) = ow(r, c);
    }
    return dense;
}

// Textbook scalar Adam, used to cross-check the block updater step by step.
struct ScalarAdam {
    double lr, b1, b2, eps;
    double m = 0.0, v = 0.0;
    long t = 0;

    double step(double param, double grad) {
        ++t;
        m = b1 * m + (1 - b1) * grad;
        v = b2 * v + (1 - b2) * grad * grad;
        const double mhat = m / (1 - std::pow(b1, double(t)));
        const double vhat = v / (1 - std::pow(b2, double(t)));
        return param - lr * mhat / (std::sqrt(vhat) + eps);
    }
};

// Direct per-window SSIM: for every pixel, loop the 11x11 window explicitly.
inline double ssim_naive(const snf::Matrix& a01, const snf::Matrix& b01, int rows, int cols) {
    const int win = 11;
    const double sigma = 1.5, c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    std::vector<double> w(size_t(win) * win);
    double wsum = 0.0;
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
            const double di = i - win / 2, dj = j - win / 2;
            w[size_t(i) * win + j] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
            wsum += w[size_t(i) * win + j];
        }
    for (double& x : w) x /= wsum;

    auto reflect = [](int i, int n) { return i < 0 ? -i - 1 : (i >= n ? 2 * n - 1 - i : i); };
    double total = 0.0;
    for (int ch = 0; ch < a01.cols(); ++ch) {
        double acc = 0.0;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
                for (int i = 0; i < win; ++i)
                    for (int j = 0; j < win; ++j) {
                        const int rr = reflect(r + i - win / 2, rows);
                        const int cc = reflect(c + j - win / 2, cols);
                        const double wa = a01(rr * cols + cc, ch);
                        const double wb = b01(rr * cols + cc, ch);
                        const double wt = w[size_t(i) * win + j];
                        ma += wt * wa;
                        mb += wt * wb;
                        saa += wt * wa * wa;
                        sbb += wt * wb * wb;
                        sab += wt * wa * wb;
                    }
                const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
                acc += (2 * ma * mb + c1) * (2 * cov + c2) /
                       ((ma * ma + mb * mb + c1) * (va + vb + c2));
            }
        total += acc / (double(rows) * cols);
    }
    return total / a01.cols();
}

// Central finite difference of the loss with respect to one parameter entry.
inline double fd_gradient(snf::StreamableNet& net, const snf::BlockKey& key, int r, int c,
                          const snf::Matrix& coords, const snf::Matrix& targets, int stage,
                          const snf::LossSpec& loss, double eps = 1e-5) {
    snf::Matrix& p = net.param(key);
    const double saved = p(r, c);
    p(r, c) = saved + eps;
    const double hi = snf::loss_value(net.forward(coords, stage), targets, loss);
    p(r, c) = saved - eps;
    const double lo = snf::loss_value(net.forward(coords, stage), targets, loss);
    p(r, c) = saved;
    return (hi - lo) / (2 * eps);
}

// FNV-1a over the raw bytes of every block of stages 1..stage.
inline uint64_t digest_stages(const snf::StreamableNet& net, int stage) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](const snf::Matrix& m) {
        const uint8_t* p = reinterpret_cast<const uint8_t*>(m.data());
        for (size_t i = 0; i < m.size() * sizeof(double); ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    for (int s = 1; s <= stage; ++s)
        for (const snf::BlockKey& key : net.stage_keys(s)) mix(net.param(key));
    return h;
}

// Unique scratch directory under the system temp dir.
inline std::string temp_dir(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("snf_test_" + tag + "_" + std::to_string(++counter) + "_" +
                      std::to_string(uint32_t(::getpid())));
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline snf::Matrix random_values01(int n, int channels, snf::Rng& rng) {
    snf::Matrix m(n, channels);
    for (size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.next_double();
    return m;
}

// Full cell-centered coordinate grid of an r x c image in sample order.
inline snf::Matrix image_grid(int rows, int cols) {
    snf::Matrix g(rows * cols, 2);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            g(r * cols + c, 0) = snf::grid_coord(c, cols);
            g(r * cols + c, 1) = snf::grid_coord(r, rows);
        }
    return g;
}

}  // namespace support

#include "snf/metrics.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "snf/errors.hpp"

namespace snf {

double mse_mean(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw ShapeError("mse: shape mismatch");
    double acc = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = pa[i] - pb[i];
        acc += d * d;
    }
    return acc / double(a.size());
}

double psnr_from_mse(double mse, double peak) {
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

double psnr01(const Matrix& pred01, const Matrix& target01, double peak) {
    return psnr_from_mse(mse_mean(pred01, target01), peak);
}

double psnr_from_norm_loss(double loss, int channels) {
    return psnr_from_mse(loss / (4.0 * channels));
}

double capped_db(double psnr) { return psnr < 99.0 ? psnr : 99.0; }

namespace {

constexpr int kWin = 11;

// Symmetric reflect: ... 2 1 0 | 0 1 2 ... | n-1 | n-1 n-2 ...
int reflect(int i, int n) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - 1 - i;
    return i;
}

std::vector<double> gaussian_window() {
    std::vector<double> w(kWin);
    const double sigma = 1.5;
    double sum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - kWin / 2;
        w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Separable Gaussian filter with reflect padding, rows then columns.
std::vector<double> blur(const std::vector<double>& img, int rows, int cols) {
    static const std::vector<double> w = gaussian_window();
    std::vector<double> tmp(img.size()), out(img.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int t = 0; t < kWin; ++t)
                acc += w[t] * img[size_t(r) * cols + reflect(c + t - kWin / 2, cols)];
            tmp[size_t(r) * cols + c] = acc;
        }
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int t = 0; t < kWin; ++t)
                acc += w[t] * tmp[size_t(reflect(r + t - kWin / 2, rows)) * cols + c];
            out[size_t(r) * cols + c] = acc;
        }
    return out;
}

}  // namespace

double ssim(const Matrix& a01, const Matrix& b01, int rows, int cols) {
    if (!a01.same_shape(b01)) throw ShapeError("ssim: shape mismatch");
    if (a01.rows() != rows * cols) throw ShapeError("ssim: sample count does not match grid");
    if (rows < kWin || cols < kWin) throw ArgumentError("ssim: grid smaller than 11x11 window");

    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    const int channels = a01.cols();
    const size_t n = size_t(rows) * cols;
    double total = 0.0;
    std::vector<double> a(n), b(n), aa(n), bb(n), ab(n);
    for (int ch = 0; ch < channels; ++ch) {
        for (size_t i = 0; i < n; ++i) {
            a[i] = a01(int(i), ch);
            b[i] = b01(int(i), ch);
            aa[i] = a[i] * a[i];
            bb[i] = b[i] * b[i];
            ab[i] = a[i] * b[i];
        }
        const auto mu_a = blur(a, rows, cols), mu_b = blur(b, rows, cols);
        const auto m_aa = blur(aa, rows, cols), m_bb = blur(bb, rows, cols);
        const auto m_ab = blur(ab, rows, cols);
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double va = m_aa[i] - mu_a[i] * mu_a[i];
            const double vb = m_bb[i] - mu_b[i] * mu_b[i];
            const double cov = m_ab[i] - mu_a[i] * mu_b[i];
            acc += (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2) /
                   ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
        }
        total += acc / double(n);
    }
    return total / channels;
}

std::vector<double> dft_1d(const std::vector<double>& x) {
    const int n = int(x.size());
    if (n < 2) throw ArgumentError("dft_1d: need at least 2 samples");
    std::vector<double> mags(size_t(n / 2) + 1);
    for (int k = 0; k <= n / 2; ++k) {
        double re = 0.0, im = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ang = -2.0 * std::numbers::pi * k * j / n;
            re += x[j] * std::cos(ang);
            im += x[j] * std::sin(ang);
        }
        mags[k] = std::hypot(re, im);
    }
    return mags;
}

namespace {

// Direct DFT along one axis of a complex grid.
std::vector<std::complex<double>> dft_axis(const std::vector<std::complex<double>>& in, int rows,
                                           int cols, bool along_cols) {
    std::vector<std::complex<double>> out(in.size());
    const int n = along_cols ? cols : rows;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            std::complex<double> acc = 0.0;
            for (int j = 0; j < n; ++j) {
                const int src = along_cols ? r * cols + j : j * cols + c;
                const int idx = along_cols ? c : r;
                const double ang = -2.0 * std::numbers::pi * idx * j / n;
                acc += in[size_t(src)] * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            out[size_t(r) * cols + c] = acc;
        }
    return out;
}

}  // namespace

Matrix spectrum_2d(const Matrix& plane) {
    const int rows = plane.rows(), cols = plane.cols();
    if (rows < 1 || cols < 1 || rows > 512 || cols > 512)
        throw ArgumentError("spectrum_2d: grid must be within 512x512");
    std::vector<std::complex<double>> g(size_t(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g[size_t(r) * cols + c] = plane(r, c);
    g = dft_axis(g, rows, cols, true);
    g = dft_axis(g, rows, cols, false);
    Matrix centered(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const int sr = ((r - rows / 2) % rows + rows) % rows;
            const int sc = ((c - cols / 2) % cols + cols) % cols;
            centered(r, c) = std::abs(g[size_t(sr) * cols + sc]);
        }
    return centered;
}

std::vector<double> radial_profile(const Matrix& centered) {
    const int rows = centered.rows(), cols = centered.cols();
    const int cr = rows / 2, cc = cols / 2;
    const int max_r = int(std::lround(std::hypot(double(std::max(cr, rows - 1 - cr)),
                                                 double(std::max(cc, cols - 1 - cc)))));
    std::vector<double> sum(size_t(max_r) + 1, 0.0);
    std::vector<long> count(size_t(max_r) + 1, 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const int rad = int(std::lround(std::hypot(double(r - cr), double(c - cc))));
            sum[size_t(rad)] += centered(r, c);
            count[size_t(rad)] += 1;
        }
    for (size_t i = 0; i < sum.size(); ++i)
        if (count[i]) sum[i] /= double(count[i]);
    return sum;
}

double spectral_centroid(const std::vector<double>& magnitudes) {
    double energy = 0.0, weighted = 0.0;
    for (size_t k = 0; k < magnitudes.size(); ++k) {
        const double e = magnitudes[k] * magnitudes[k];
        energy += e;
        weighted += double(k) * e;
    }
    if (energy == 0.0) throw ArgumentError("spectral_centroid: all-zero spectrum");
    return weighted / energy;
}

double max_drawdown(const std::vector<double>& curve) {
    double peak = -std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double v : curve) {
        if (v > peak) peak = v;
        worst = std::max(worst, peak - v);
    }
    return worst;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void write_series_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "epoch,stage,loss,psnr\n";
    for (const auto& row : report.series)
        out << row.epoch << "," << row.stage << "," << fmt(row.loss) << ","
            << fmt(capped_db(row.psnr)) << "\n";
    if (!out) throw IoError("failed writing " + path);
}

void write_stage_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "stage,params,mse,psnr,ssim\n";
    for (const auto& row : report.stages) {
        out << row.stage << "," << row.params << "," << fmt(row.mse) << ","
            << fmt(capped_db(row.psnr)) << ",";
        if (row.ssim) out << fmt(*row.ssim);
        out << "\n";
    }
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace snf

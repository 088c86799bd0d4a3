#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snf/matrix.hpp"

namespace snf {

// Post-hoc quality of one width prefix. mse/psnr are measured in [0,1]
// de-normalized space; psnr may be +inf (mse == 0) and is capped at 99 dB
// only when written to CSV.
struct StageRow {
    int stage = 0;
    long params = 0;
    double mse = 0.0;
    double psnr = 0.0;
    std::optional<double> ssim;
};

// One training-log point. loss is the training objective in normalized
// [-1,1] space; psnr is derived from it via the [0,1] mapping.
struct SeriesRow {
    long epoch = 0;
    int stage = 0;
    double loss = 0.0;
    double psnr = 0.0;
};

struct MetricsReport {
    std::vector<StageRow> stages;
    std::vector<SeriesRow> series;
};

// Mean squared difference over all entries (samples x channels).
double mse_mean(const Matrix& a, const Matrix& b);

// 10*log10(peak^2/mse); +inf when mse == 0.
double psnr_from_mse(double mse, double peak = 1.0);
double psnr01(const Matrix& pred01, const Matrix& target01, double peak = 1.0);

// PSNR of a normalized-space training loss. The [-1,1] -> [0,1] map halves
// every error and the loss sums over channels, so mse01 = loss / (4c).
double psnr_from_norm_loss(double loss, int channels);

// 99-dB cap used in CSV tables (keeps +inf sentinels out of files).
double capped_db(double psnr);

// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, dynamic range 1, symmetric-reflect padding; channels averaged.
// a01/b01 are N x c grids in row-major order, N == rows*cols >= 11x11.
double ssim(const Matrix& a01, const Matrix& b01, int rows, int cols);

// Magnitudes of DFT bins 0..N/2 of a regularly sampled sequence.
std::vector<double> dft_1d(const std::vector<double>& x);

// Centered 2D DFT magnitudes of one plane; bin (rows/2, cols/2) is DC.
Matrix spectrum_2d(const Matrix& plane);

// Mean magnitude over integer-radius annuli around the center bin.
std::vector<double> radial_profile(const Matrix& centered);

// Energy-weighted (|X|^2) mean bin index.
double spectral_centroid(const std::vector<double>& magnitudes);

// Largest peak-to-trough dip: max over time of running-max minus current.
double max_drawdown(const std::vector<double>& curve);

// epoch,stage,loss,psnr
void write_series_csv(const std::string& path, const MetricsReport& report);
// stage,params,mse,psnr,ssim (ssim column empty when absent)
void write_stage_csv(const std::string& path, const MetricsReport& report);

}  // namespace snf

#pragma once

#include <string>
#include <vector>

#include "snf/errors.hpp"
#include "snf/loss.hpp"
#include "snf/matrix.hpp"
#include "snf/rng.hpp"

namespace snf {

// Center of cell `index` when [-1,1] is split into `count` equal cells.
// Grids built from this are strictly inside [-1,1] and symmetric about 0.
inline double grid_coord(int index, int count) {
    return -1.0 + 2.0 * (index + 0.5) / count;
}

// A discretely sampled target signal. Coordinates live in [-1,1]^n, values in
// [-1,1]^c; the raw signal is value_offset + value_scale * normalized value.
// Sample order is row-major over grid_shape: {N} for 1D, {H,W} for images
// (index r*W + c, coords (x,y)), {F,H,W} for video (coords (t,x,y)).
struct SampledSignal {
    Matrix coords;
    Matrix values;
    std::vector<int> grid_shape;
    double value_offset = 0.0;
    double value_scale = 1.0;

    int samples() const { return coords.rows(); }
    int dims() const { return coords.cols(); }
    int channels() const { return values.cols(); }
};

// Sum of sinusoids sum_i sin(2*pi*k_i*x + phi_i) sampled on x in [0,1].
struct SinusoidSpec {
    std::vector<double> freqs;
    std::vector<double> phases;
    int samples = 256;
};

// Frequencies 5,10,...,50 with phases drawn U(0, 2*pi).
SinusoidSpec default_sinusoid_spec(Rng& rng, int samples = 256);

// Raw-scale value of the component sum at x in [0,1].
double sinusoid_value(const SinusoidSpec& spec, double x01);

enum class SampleMode { regular_grid, random_uniform };

// Regular mode samples cell centers (j+0.5)/N of [0,1] (leakage-free DFT
// bins); random mode draws x ~ U(0,1). Values are scaled by 1/len(freqs)
// into [-1,1]; value_scale restores the raw scale.
SampledSignal make_sinusoid_1d(const SinusoidSpec& spec, SampleMode mode, Rng& rng);

// Binary 8-bit PPM (P6) or PGM (P5), maxval 255. Pixel centers map to
// [-1,1]^2, byte values linearly onto [-1,1].
SampledSignal load_image_grid(const std::string& path);

// Writes values01 (N x c grid samples in [0,1], clamped and rounded to 8
// bits) as P6 when c == 3 or P5 when c == 1.
void write_image(const std::string& path, const Matrix& values01, int rows, int cols);

// Loads frames [first_frame, first_frame + frame_count) of the directory's
// lexicographically sorted files. The time coordinate places each frame at
// its cell center within a planned_total-frame range, so the extents of
// successive stage prefixes nest.
SampledSignal load_video_grid(const std::string& dir, int first_frame, int frame_count,
                              int planned_total);

// Right-exclusive boundary column of cumulative strips 1..k out of num_strips.
int strip_boundary_col(int cols, int num_strips, int k);

// Mask over an {H,W} signal: true for pixels in vertical strips 1..k
// (left-to-right, equal split). Masks are nested in k.
RegionMask partition_spatial(const SampledSignal& signal, int num_strips, int k);

}  // namespace snf

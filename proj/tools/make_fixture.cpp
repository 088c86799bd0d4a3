// Writes the deterministic test fixtures: a 64x64 photo-like RGB image and
// an 8-frame 32x32 moving-square video.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "snf/matrix.hpp"
#include "snf/rng.hpp"
#include "snf/signal.hpp"

namespace fs = std::filesystem;
using namespace snf;

namespace {

// Layered landscape: smooth sky gradient and sun (low frequency), a ridge
// silhouette (mid), grass texture plus a couple of thin trunks (high).
Matrix photo64() {
    const int n = 64;
    Rng rng(424242);
    Matrix img(n * n, 3);
    for (int r = 0; r < n; ++r) {
        const double y = (r + 0.5) / n;  // 0 top .. 1 bottom
        for (int c = 0; c < n; ++c) {
            const double x = (c + 0.5) / n;
            double red, green, blue;

            const double ridge = 0.55 + 0.10 * std::sin(3.1 * x * 6.283) * 0.5 +
                                 0.05 * std::sin(1.3 * x * 6.283 + 1.0);
            if (y < ridge) {
                // Sky: vertical gradient with a soft sun disk.
                red = 0.35 + 0.45 * y;
                green = 0.45 + 0.30 * y;
                blue = 0.85 - 0.25 * y;
                const double d = std::hypot(x - 0.72, y - 0.22);
                const double sun = std::exp(-d * d / (2 * 0.06 * 0.06));
                red += 0.55 * sun;
                green += 0.40 * sun;
                blue += 0.10 * sun;
            } else if (y < ridge + 0.08) {
                // Ridge band.
                const double t = (y - ridge) / 0.08;
                red = 0.25 - 0.10 * t;
                green = 0.22 - 0.06 * t;
                blue = 0.28 - 0.10 * t;
            } else {
                // Field with fine texture.
                red = 0.16 + 0.05 * std::sin(24.0 * x * 6.283 + 5.0 * y);
                green = 0.36 + 0.08 * std::sin(19.0 * x * 6.283 + 2.0 * y) + 0.10 * (y - ridge);
                blue = 0.14 + 0.03 * std::sin(11.0 * x * 6.283);
            }
            // Two thin dark trunks with brighter crowns.
            for (double tx : {0.22, 0.38}) {
                if (std::abs(x - tx) < 0.012 && y > ridge - 0.16 && y < ridge + 0.10) {
                    red = green = blue = 0.10;
                }
                const double d = std::hypot(x - tx, y - (ridge - 0.18));
                if (d < 0.05) {
                    red = 0.18;
                    green = 0.40;
                    blue = 0.16;
                }
            }
            const double noise = 0.02 * (rng.next_double() - 0.5);
            const int i = r * n + c;
            img(i, 0) = std::clamp(red + noise, 0.0, 1.0);
            img(i, 1) = std::clamp(green + noise, 0.0, 1.0);
            img(i, 2) = std::clamp(blue + noise, 0.0, 1.0);
        }
    }
    return img;
}

// Soft-edged bright square drifting across a static gradient background.
Matrix video_frame(int f) {
    const int n = 32;
    Matrix img(n * n, 3);
    const double cx = (4.5 + 3.0 * f) / n;
    const double cy = (5.5 + 2.5 * f) / n;
    const double half = 3.5 / n;
    const double edge = 1.5 / n;
    for (int r = 0; r < n; ++r) {
        const double y = (r + 0.5) / n;
        for (int c = 0; c < n; ++c) {
            const double x = (c + 0.5) / n;
            double red = 0.15 + 0.25 * x;
            double green = 0.20 + 0.20 * y;
            double blue = 0.45 + 0.15 * (1.0 - y);
            const double dx = std::max(0.0, std::abs(x - cx) - half);
            const double dy = std::max(0.0, std::abs(y - cy) - half);
            const double t = std::clamp(1.0 - std::max(dx, dy) / edge, 0.0, 1.0);
            red = red + t * (0.95 - red);
            green = green + t * (0.55 - green);
            blue = blue + t * (0.15 - blue);
            const int i = r * n + c;
            img(i, 0) = red;
            img(i, 1) = green;
            img(i, 2) = blue;
        }
    }
    return img;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "data";
    fs::create_directories(fs::path(out_dir) / "video");

    const std::string photo = (fs::path(out_dir) / "photo64.ppm").string();
    write_image(photo, photo64(), 64, 64);
    std::printf("wrote %s\n", photo.c_str());

    for (int f = 0; f < 8; ++f) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%02d.ppm", f);
        const std::string path = (fs::path(out_dir) / "video" / name).string();
        write_image(path, video_frame(f), 32, 32);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

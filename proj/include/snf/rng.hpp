#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "snf/errors.hpp"

namespace snf {

// xoshiro256++ (Blackman & Vigna), state seeded through splitmix64.
// Fully specified here so the same seed yields the same stream on every
// platform, which keeps every experiment in this project reproducible.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : s_) {
            // splitmix64 step
            x += 0x9E3779B97F4A7C15ull;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            word = z ^ (z >> 31);
        }
    }

    uint64_t next_u64() {
        auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 significant bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        if (!(lo < hi)) throw ArgumentError("uniform: lo must be < hi");
        double v = lo + (hi - lo) * next_double();
        // guard against rounding up to hi for large magnitudes
        if (v >= hi) v = std::nextafter(hi, lo);
        return v;
    }

    std::vector<double> uniform(double lo, double hi, size_t n) {
        if (!(lo < hi)) throw ArgumentError("uniform: lo must be < hi");
        std::vector<double> out(n);
        for (auto& v : out) v = uniform(lo, hi);
        return out;
    }

private:
    uint64_t s_[4];
};

}  // namespace snf

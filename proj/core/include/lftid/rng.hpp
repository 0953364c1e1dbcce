// Reproducible random numbers. mt19937_64 provides the raw 64-bit stream
// (its output sequence is pinned by the standard), and the mappings to
// uniform and normal variates are written out explicitly here because the
// <random> distribution classes are free to differ between standard
// libraries. Substreams are derived by SplitMix64-mixing the base seed with
// an index, so per-sample parallel execution reproduces the serial results.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lftid {

// SplitMix64 step, used as a seed mixer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix_seed(seed, index));
    }
    static Rng substream(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
        return Rng(mix_seed(mix_seed(seed, i), j));
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + uniform01() * (hi - lo);
    }

    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace lftid

#pragma once

#include <cstdint>
#include <random>

namespace medwit {

// Seeded generator with hand-rolled draw helpers. std::*_distribution output
// is implementation-defined, so drawing directly from the engine keeps
// ensembles reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform index in [0, n). Modulo bias is ~n/2^64, irrelevant for the
    // small n used here.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

    double normal() {
        // Box-Muller; two uniforms per call, second discarded for simplicity.
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 engine_;
};

// Per-instance sub-seed derived from a base seed (splitmix64 step).
inline std::uint64_t subseed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace medwit

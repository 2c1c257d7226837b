#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace scalinglab {

// SplitMix64 finalizer; used to turn arbitrary integers into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic per-task seed derived from a master seed and up to two
/// stream indices. Trials, seeds, and grid points each get their own stream
/// so results do not depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ mix64(a));
    h = mix64(h ^ mix64(b + 0x5851f42d4c957f2dull));
    return h;
}

/// Seeded random stream. The engine (mt19937_64) is fully specified by the
/// standard; uniform and Gaussian mappings are implemented here rather than
/// with std distributions, whose algorithms are implementation-defined.
/// Identical seeds therefore give bit-identical draws on any toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate via Box-Muller. Deviates are produced in
    /// pairs; the second of each pair is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    void fill_gaussian(double* dst, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) dst[i] = gaussian();
    }

    /// Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace scalinglab

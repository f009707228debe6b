// Deterministic RNG with counter-based stream derivation.
//
// A 64-bit root seed is expanded into independent substreams by mixing
// stream keys (row index, replication index, ...) through the splitmix64
// finalizer before seeding a xoshiro256++ state.  Two calls with the same
// (seed, keys) produce bit-identical draws, so per-row / per-replication
// work can run serial or parallel with the same output.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rcar {

inline std::uint64_t splitmix64_step(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stateless avalanche of a single word.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDULL;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ULL;
    z ^= z >> 33;
    return z;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) { seed_state(seed); }

    // Derived substream: key words are folded into the seed one at a time.
    Rng(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
        std::uint64_t h = seed;
        h = mix64(h ^ (0x9E3779B97F4A7C15ULL + mix64(k1)));
        h = mix64(h ^ (0xC2B2AE3D27D4EB4FULL + mix64(k2)));
        h = mix64(h ^ (0x165667B19E3779F9ULL + mix64(k3)));
        seed_state(h);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); safe under log().
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double exponential() { return -std::log(uniform01()); }

    // Marsaglia polar method, one spare cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // Marsaglia–Tsang rejection; valid for every shape > 0 (unit scale).
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
        if (shape < 1.0) {
            const double u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double g1 = gamma(a);
        const double g2 = gamma(b);
        return g1 / (g1 + g2);
    }

    double rademacher() { return (next() & 1ULL) ? 1.0 : -1.0; }

    // Poisson draw; inversion for small means, Hörmann PTRS otherwise.
    std::int64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean < 30.0) {
            const double l = std::exp(-mean);
            std::int64_t k = 0;
            double p = uniform01();
            while (p > l) {
                ++k;
                p *= uniform01();
            }
            return k;
        }
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            double u = uniform01() - 0.5;
            double v = uniform01();
            const double us = 0.5 - std::fabs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            const double k = kf;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0))
                return static_cast<std::int64_t>(kf);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void seed_state(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64_step(x);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream key tags; distinct constants keep unrelated uses of the same seed
// from colliding.
namespace stream_tag {
inline constexpr std::uint64_t kRow = 0x01;
inline constexpr std::uint64_t kReplication = 0x02;
inline constexpr std::uint64_t kPoissonPoint = 0x03;
inline constexpr std::uint64_t kPoissonCount = 0x04;
inline constexpr std::uint64_t kScratch = 0x05;
}  // namespace stream_tag

// Seed for replication r of an experiment rooted at root_seed.
inline std::uint64_t replication_seed(std::uint64_t root_seed, std::uint64_t r) {
    return mix64(root_seed ^ (0x6C62272E07BB0142ULL + mix64(stream_tag::kReplication) +
                              0x9E3779B97F4A7C15ULL * mix64(r + 1)));
}

}  // namespace rcar

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace vvjump {

// Deterministic random source used everywhere in the library.
//
// All variate transformations (uniform, normal, gamma) are implemented here
// rather than through std::*_distribution, whose output is not pinned by the
// standard. Given the same seed and call sequence the stream is bit-identical
// across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent substream seed derived from a master seed. SplitMix64 mix,
    // so (master, stream_id) pairs give decorrelated generators.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
        std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Marsaglia polar; caches the second variate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Gamma(shape, scale) via Marsaglia-Tsang; shape < 1 handled by boosting.
    double gamma(double shape, double scale) {
        if (shape <= 0.0 || scale <= 0.0)
            throw std::invalid_argument("Rng::gamma: shape and scale must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
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
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    // InverseGamma(shape, scale): X such that 1/X ~ Gamma(shape, 1/scale).
    double inverse_gamma(double shape, double scale) {
        return scale / gamma(shape, 1.0);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace vvjump

#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace srmdp {

/// xoshiro256++ with splitmix64 seeding. Used instead of the standard
/// <random> engines/distributions so that sampled ensembles are bit-identical
/// across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    /// Independent stream derived from (seed, ids...). Streams for distinct
    /// id tuples are seeded through separate splitmix64 chains.
    template <typename... Ids>
    static Rng stream(std::uint64_t seed, Ids... ids) {
        std::uint64_t h = seed;
        ((h = mix64(h ^ (static_cast<std::uint64_t>(ids) + 0x9e3779b97f4a7c15ULL))), ...);
        return Rng(h);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1), safe as a log argument.
    double uniform_pos() {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return u;
    }

    /// Standard normal via Box-Muller (no cached second draw, so the stream
    /// position is a pure function of the number of calls).
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang, with the boosting trick for
    /// shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform_pos();
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
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Poisson by Knuth's product method; adequate for the demand rates here.
    std::uint64_t poisson(double rate) {
        const double limit = std::exp(-rate);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform_pos();
        } while (p > limit);
        return k - 1;
    }

    /// Draws an index from an unnormalized nonnegative weight vector.
    std::size_t categorical(const double* weights, std::size_t n) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += weights[i];
        double u = uniform() * total;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return n - 1;
    }

    /// Fills out[0..n) with a Dirichlet(alpha) draw (normalized gamma draws).
    void dirichlet(const double* alpha, double* out, std::size_t n) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = gamma(alpha[i]);
            total += out[i];
        }
        if (total <= 0.0) {
            // all draws underflowed; fall back to the concentration mean
            double asum = 0.0;
            for (std::size_t i = 0; i < n; ++i) asum += alpha[i];
            for (std::size_t i = 0; i < n; ++i) out[i] = alpha[i] / asum;
            return;
        }
        for (std::size_t i = 0; i < n; ++i) out[i] /= total;
    }

private:
    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace srmdp

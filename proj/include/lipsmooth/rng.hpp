#pragma once

#include <cmath>
#include <cstdint>

#include "lipsmooth/box.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic RNG (xoshiro-free: plain SplitMix64 generator) with explicit
// stream derivation so every consumer of randomness gets an independent,
// reproducible stream from one master seed.  Distributions are hand-rolled
// (not <random> distributions) so outputs are bit-identical across standard
// library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent stream `k` derived from `master`.
    static Rng stream(std::uint64_t master, std::uint64_t k) {
        return Rng(splitmix64(master ^ splitmix64(k + 0x632BE59BD9B4E019ULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (always consumes two uniforms).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925287 * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    Vec point_in(const IntervalBox& box) {
        Vec x(box.dim());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(box.lo[i], box.hi[i]);
        return x;
    }

  private:
    std::uint64_t state_;
};

}  // namespace lipsmooth

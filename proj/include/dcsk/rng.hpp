// rng.hpp - Deterministic random number layer.
//
// All stochastic draws in the library go through Rng so that a run is a pure
// function of its seed, bit-identical across platforms and worker counts.
// Gaussian variates use the Marsaglia polar method instead of
// std::normal_distribution, whose output is implementation-defined.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dcsk {

// SplitMix64 finalizer; good 64-bit avalanche, used for seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Child seed for (grid point, simulation block). Fixed chain so that results
// reproduce independently of scheduling:
//   s = splitmix64(master); s = splitmix64(s ^ point); s = splitmix64(s ^ block)
constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                    std::uint64_t point_index,
                                    std::uint64_t block_index) noexcept {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ point_index);
    s = splitmix64(s ^ block_index);
    return s;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (-1, 1); 0 is possible and callers that
    // care (chaos seeding) reject it themselves.
    double uniform_open() { return 2.0 * uniform01() - 1.0; }

    // Standard normal, Marsaglia polar method with one cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform_open();
            v = uniform_open();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Equiprobable +1 / -1.
    int bipolar() { return (engine_() & 1ull) ? +1 : -1; }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dcsk

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fracdn/types.hpp"

namespace fracdn {

// Deterministic random source. std::mt19937_64 has a portable, standardized
// output sequence; the uniform and Gaussian transforms are spelled out here
// (instead of std::uniform_real_distribution / std::normal_distribution,
// whose outputs are implementation-defined) so that a seed fixes every
// downstream byte on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second deviate of each pair is
    // cached so consecutive calls consume a fixed number of engine draws.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    Vec gaussian_vector(Index n) {
        Vec v(n);
        for (Index i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    std::uint64_t raw() { return eng_(); }

    // Recorded in output provenance so runs state their randomness contract.
    static const char* algorithm_id() { return "mt19937_64/box-muller-53bit"; }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fracdn

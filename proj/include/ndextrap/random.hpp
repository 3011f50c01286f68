#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ndextrap {

/// SplitMix64 generator (Steele, Lea & Flood 2014 constants).
///
/// Chosen over <random> engines + distributions because the standard
/// distributions are implementation-defined; every value drawn here is a
/// fixed function of the seed:
///   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
///   normal()   = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), one pair of uniforms per draw
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    double normal() noexcept {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace ndextrap

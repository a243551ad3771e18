#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

namespace uavpp {

// Seeded random source for every stochastic draw in the library.
//
// Doubles are produced directly from mt19937_64 words instead of
// std::uniform_real_distribution, so a (seed, draw order) pair gives the
// same stream on every platform and toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform index in [0, n); n must be positive.
    std::size_t index(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform01() * static_cast<double>(n)));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace uavpp

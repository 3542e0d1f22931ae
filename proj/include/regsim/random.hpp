#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace regsim {

// Per-run random source. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the uniform and Gaussian transforms below are
// spelled out so trajectories do not depend on library distribution code.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) from the top 53 bits of one engine draw.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes exactly two uniforms, no caching.
    double gaussian()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double gaussian(double stddev) { return stddev * gaussian(); }

private:
    std::mt19937_64 engine_;
};

} // namespace regsim

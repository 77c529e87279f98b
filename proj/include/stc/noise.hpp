#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace stc {

// Name of the only noise generator this toolkit implements; configs must ask
// for it explicitly so a future alternative cannot be picked up silently.
inline constexpr const char* kSupportedRng = "mt19937_64-box-muller";

// Seeded standard-normal source: mt19937_64 bit stream mapped through an
// explicit Box-Muller transform. std::normal_distribution is deliberately
// avoided because its output sequence is implementation-defined; this one
// produces identical draws for identical seeds on every platform.
class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : rng_(seed) {}

    // One standard-normal draw; consumes exactly two engine outputs.
    // No pair caching: the second Box-Muller branch is discarded so the
    // draw count is easy to reason about.
    double operator()() {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Draw with standard deviation sigma; sigma == 0 returns 0 without
    // consuming engine output, so a noiseless run leaves the stream untouched.
    double draw(double sigma) {
        if (sigma == 0.0) return 0.0;
        return sigma * (*this)();
    }

private:
    // Top 53 bits, shifted into (0, 1]; never 0, so log(u1) is always finite.
    double uniform_open() {
        return static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
};

} // namespace stc

#pragma once

#include <array>
#include <cstddef>

#include "stc/delay_polynomial.hpp"

namespace stc {

// Parameter set of the fourth-order plant model
//   (1 + a1 z^-1 + ... + a4 z^-4) y(t) = z^-1 (b0 + ... + b3 z^-3) u(t) + noise + offset
// The unit constant of the output polynomial is implied, not stored.
// Flat layout [a1..a4, b0..b3] matches the estimator's parameter vector.
struct ArmaxParameters {
    std::array<double, 4> a{};
    std::array<double, 4> b{};

    static constexpr std::size_t kCount = 8;

    [[nodiscard]] static ArmaxParameters from_flat(const std::array<double, kCount>& v) {
        ArmaxParameters p;
        for (std::size_t i = 0; i < 4; ++i) p.a[i] = v[i];
        for (std::size_t i = 0; i < 4; ++i) p.b[i] = v[4 + i];
        return p;
    }

    [[nodiscard]] std::array<double, kCount> to_flat() const {
        return {a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]};
    }

    [[nodiscard]] DelayPolynomial a_poly() const {
        return DelayPolynomial{1.0, a[0], a[1], a[2], a[3]};
    }

    [[nodiscard]] DelayPolynomial b_poly() const {
        return DelayPolynomial{b[0], b[1], b[2], b[3]};
    }

    // Output polynomial evaluated at z = 1: 1 + a1 + a2 + a3 + a4.
    [[nodiscard]] double a_at_one() const { return 1.0 + a[0] + a[1] + a[2] + a[3]; }

    // Input polynomial evaluated at z = 1: b0 + b1 + b2 + b3.
    [[nodiscard]] double b_at_one() const { return b[0] + b[1] + b[2] + b[3]; }

    [[nodiscard]] bool operator==(const ArmaxParameters&) const = default;
};

} // namespace stc

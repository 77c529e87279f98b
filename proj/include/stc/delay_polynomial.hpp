#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "stc/errors.hpp"
#include "stc/signal_history.hpp"

namespace stc {

// Roots must lie strictly inside the unit circle by this margin to count as
// stable; keeps borderline numerical roots from flapping between verdicts.
inline constexpr double kStabilityMargin = 1e-9;

// Polynomial in the one-step delay operator:
//   p(z^-1) = c0 + c1 z^-1 + ... + cn z^-n
class DelayPolynomial {
public:
    DelayPolynomial(std::initializer_list<double> coeffs) : c_(coeffs) { check(); }
    explicit DelayPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { check(); }

    [[nodiscard]] static DelayPolynomial identity() { return DelayPolynomial{1.0}; }

    [[nodiscard]] std::size_t degree() const noexcept { return c_.size() - 1; }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return c_; }

    // Coefficient of z^-k; zero beyond the stored degree.
    [[nodiscard]] double operator[](std::size_t k) const {
        return k < c_.size() ? c_[k] : 0.0;
    }

    [[nodiscard]] bool monic() const noexcept { return c_[0] == 1.0; }

    [[nodiscard]] bool operator==(const DelayPolynomial& other) const = default;

private:
    void check() const {
        if (c_.empty()) throw ConfigError("DelayPolynomial needs at least one coefficient");
    }

    std::vector<double> c_;
};

// Sum of coefficients, i.e. the polynomial evaluated at z = 1.
// This is the steady-state weight the polynomial applies to a constant signal.
[[nodiscard]] inline double eval_at_one(const DelayPolynomial& p) {
    double s = 0.0;
    for (double c : p.coeffs()) s += c;
    return s;
}

// FIR application: sum_k c_k * h[k], newest sample first.
[[nodiscard]] inline double filter(const DelayPolynomial& p, const SignalHistory& h) {
    if (h.capacity() < p.degree() + 1)
        throw ConfigError("signal history shorter than polynomial span");
    double s = 0.0;
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * h[k];
    return s;
}

[[nodiscard]] inline DelayPolynomial multiply(const DelayPolynomial& p, const DelayPolynomial& q) {
    std::vector<double> out(p.degree() + q.degree() + 1, 0.0);
    for (std::size_t i = 0; i <= p.degree(); ++i)
        for (std::size_t j = 0; j <= q.degree(); ++j)
            out[i + j] += p.coeffs()[i] * q.coeffs()[j];
    return DelayPolynomial(std::move(out));
}

[[nodiscard]] inline DelayPolynomial add(const DelayPolynomial& p, const DelayPolynomial& q) {
    std::vector<double> out(std::max(p.degree(), q.degree()) + 1, 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = p[k] + q[k];
    return DelayPolynomial(std::move(out));
}

// Roots of the characteristic polynomial c0 z^n + c1 z^(n-1) + ... + cn,
// via the eigenvalues of its companion matrix. Requires c0 != 0.
[[nodiscard]] inline std::vector<std::complex<double>> roots(const DelayPolynomial& p) {
    const std::size_t n = p.degree();
    if (n == 0) return {};
    if (p.coeffs()[0] == 0.0)
        throw ConfigError("leading coefficient must be nonzero to compute roots");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) =
            -p.coeffs()[n - i] / p.coeffs()[0];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

// True when every characteristic root lies strictly inside the unit circle
// (with margin). A degree-0 polynomial has no dynamics and is stable.
[[nodiscard]] inline bool is_stable(const DelayPolynomial& p) {
    if (p.degree() == 0) return true;
    for (const auto& z : roots(p))
        if (std::abs(z) >= 1.0 - kStabilityMargin) return false;
    return true;
}

} // namespace stc

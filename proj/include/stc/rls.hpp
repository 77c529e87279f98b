#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

#include "stc/armax_parameters.hpp"
#include "stc/errors.hpp"
#include "stc/signal_history.hpp"

namespace stc {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

// Regression vector for the one-step-ahead model y(t) = phi(t) . theta:
//   phi = [-y(t-1), ..., -y(t-4), u(t-1), ..., u(t-4)]
// Histories must hold samples up to t-1 only, never the time-t ones.
[[nodiscard]] inline Vec8 build_regressor(const SignalHistory& y_hist,
                                          const SignalHistory& u_hist) {
    if (y_hist.capacity() < 4 || u_hist.capacity() < 4)
        throw ConfigError("regressor needs four past samples of output and command");
    Vec8 phi;
    for (int i = 0; i < 4; ++i) phi(i) = -y_hist[static_cast<std::size_t>(i)];
    for (int i = 0; i < 4; ++i) phi(4 + i) = u_hist[static_cast<std::size_t>(i)];
    return phi;
}

struct RlsConfig {
    std::array<double, 8> theta0{};   // initial parameter estimate
    double p0_scale = 1e4;            // P(0) = p0_scale * I; 0 freezes the estimate
    double lambda = 0.998;            // exponential forgetting factor
    double min_excitation = 0.0;      // skip updates with phi'P phi below this; 0 = never skip

    void validate() const {
        for (double v : theta0)
            if (!std::isfinite(v)) throw ConfigError("initial estimate must be finite");
        if (!std::isfinite(p0_scale) || p0_scale < 0.0)
            throw ConfigError("covariance scale must be finite and non-negative");
        if (!(lambda >= 0.9 && lambda <= 1.0))
            throw ConfigError("forgetting factor must lie in [0.9, 1.0]");
        if (!std::isfinite(min_excitation) || min_excitation < 0.0)
            throw ConfigError("excitation threshold must be finite and non-negative");
    }

    [[nodiscard]] bool operator==(const RlsConfig&) const = default;
};

struct RlsUpdate {
    double eps = 0.0;      // prediction error y - phi.theta, taken before the step
    bool applied = false;  // false when skipped (low excitation) or rejected (fault)
    bool fault = false;    // non-finite input; estimator state left untouched
};

// Recursive least squares with exponential forgetting.
//   eps   = y - phi.theta
//   gain  = P phi / (lambda + phi'P phi)
//   theta = theta + gain * eps
//   P     = (P - gain phi'P) / lambda
// The covariance update is computed in the explicitly symmetric outer-product
// form and re-symmetrized every step; the worst asymmetry ever seen before
// re-symmetrization is tracked as a numerical health diagnostic.
class RlsEstimator {
public:
    explicit RlsEstimator(const RlsConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        for (int i = 0; i < 8; ++i) theta_(i) = cfg_.theta0[static_cast<std::size_t>(i)];
        p_ = cfg_.p0_scale * Mat8::Identity();
    }

    RlsUpdate update(const Vec8& phi, double y) {
        RlsUpdate res;
        if (!std::isfinite(y) || !phi.allFinite()) {
            res.fault = true;
            ++faults_;
            return res;
        }
        res.eps = y - phi.dot(theta_);
        const Vec8 g = p_ * phi;
        const double excitation = phi.dot(g);
        if (cfg_.min_excitation > 0.0 && excitation < cfg_.min_excitation)
            return res;

        const double den = cfg_.lambda + excitation;
        theta_ += g * (res.eps / den);
        p_ = (p_ - (g * g.transpose()) / den) / cfg_.lambda;

        const Mat8 pt = p_.transpose();
        const double asym = (p_ - pt).cwiseAbs().maxCoeff();
        if (asym > max_asymmetry_) max_asymmetry_ = asym;
        p_ = 0.5 * (p_ + pt);

        res.applied = true;
        return res;
    }

    // Re-opens a converged or frozen estimator: P = alpha * I, estimate kept.
    void reset_covariance(double alpha) {
        if (!std::isfinite(alpha) || alpha <= 0.0)
            throw ConfigError("covariance reset scale must be positive");
        p_ = alpha * Mat8::Identity();
    }

    [[nodiscard]] const Vec8& theta() const noexcept { return theta_; }

    [[nodiscard]] ArmaxParameters estimate() const {
        std::array<double, 8> flat;
        for (int i = 0; i < 8; ++i) flat[static_cast<std::size_t>(i)] = theta_(i);
        return ArmaxParameters::from_flat(flat);
    }

    [[nodiscard]] const Mat8& covariance() const noexcept { return p_; }
    [[nodiscard]] double lambda() const noexcept { return cfg_.lambda; }
    [[nodiscard]] double max_asymmetry() const noexcept { return max_asymmetry_; }
    [[nodiscard]] long fault_count() const noexcept { return faults_; }

private:
    RlsConfig cfg_;
    Vec8 theta_;
    Mat8 p_;
    double max_asymmetry_ = 0.0;
    long faults_ = 0;
};

} // namespace stc

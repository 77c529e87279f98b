#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "stc/armax_parameters.hpp"
#include "stc/delay_polynomial.hpp"
#include "stc/errors.hpp"
#include "stc/signal_history.hpp"

namespace stc {

// Floors below which an estimated gain or a command-equation denominator is
// treated as degenerate instead of being divided by.
inline constexpr double kGainEpsilon = 1e-6;
inline constexpr double kDenominatorEpsilon = 1e-6;

// Inverse dc gain of the estimated model, A(1)/B(1): the steady command per
// unit of constant reference. Empty when |B(1)| is too small to trust.
[[nodiscard]] inline std::optional<double> compute_kf(const ArmaxParameters& est) {
    const double b1 = est.b_at_one();
    if (std::abs(b1) < kGainEpsilon) return std::nullopt;
    return est.a_at_one() / b1;
}

// Reference compensation gain 1 + r * A(1)/B(1): pre-scales the reference so
// a constant command penalty leaves no steady-state tracking offset.
[[nodiscard]] inline std::optional<double> compute_kc(const ArmaxParameters& est, double r) {
    const auto kf = compute_kf(est);
    if (!kf) return std::nullopt;
    return 1.0 + r * *kf;
}

enum class ControlVariant { J1, J2, General };

struct ControllerConfig {
    ControlVariant variant = ControlVariant::J1;
    double r = 0.01;                                     // command penalty weight
    DelayPolynomial c = DelayPolynomial::identity();     // noise polynomial (general law)
    double d = 0.0;                                      // known constant plant offset (general law)
    std::optional<std::pair<double, double>> u_limits;   // optional command saturation

    void validate() const {
        if (!std::isfinite(r) || r < 0.0)
            throw ConfigError("command penalty must be finite and non-negative");
        if (!c.monic())
            throw ConfigError("controller noise polynomial must be monic");
        if (variant == ControlVariant::General && !is_stable(c))
            throw ConfigError("controller noise polynomial must be stable");
        if (!std::isfinite(d))
            throw ConfigError("constant offset must be finite");
        if (u_limits) {
            if (!std::isfinite(u_limits->first) || !std::isfinite(u_limits->second)
                || !(u_limits->first < u_limits->second))
                throw ConfigError("command limits must be finite with lower < upper");
        }
    }
};

// Certainty-equivalence self-tuning controller. Each law solves the implicit
// command equation
//   D(z^-1) u(t) = W(z^-1) w(t) - F(z^-1) y(t) - offset
// for u(t), where the polynomials are reassembled every sample from the
// current parameter estimate:
//
//   minimum variance with penalty-difference weighting (J1):
//     D = B_hat + r (1 - z^-1),  W = 1,          F = z [1 - A_hat]
//   penalty with reference compensation (J2):
//     D = B_hat + r,             W = kc,         F = z [1 - A_hat]
//   general colored-noise form:
//     D = B_hat + r (1 - z^-1) C, W = C,         F = z [C - A_hat], offset = d
//
// With C = identity and d = 0 the general form reduces coefficient-for-
// coefficient to J1. The three share one evaluator, so that reduction is
// exact in floating point, not merely approximate.
class SelfTuningController {
public:
    explicit SelfTuningController(ControllerConfig cfg, int warmup_steps = 5)
        : cfg_(std::move(cfg)),
          warmup_steps_(warmup_steps),
          y_hist_(history_depth(cfg_)),
          u_hist_(history_depth(cfg_)),
          w_hist_(history_depth(cfg_)) {
        cfg_.validate();
        if (warmup_steps_ < 0) throw ConfigError("warm-up length must be non-negative");
    }

    // One closed-loop sample: refresh gains from the estimate and produce the
    // command for reference w and measured output y. Emits u = 0 during the
    // warm-up period while the estimator gathers its first regressors.
    double step(const ArmaxParameters& est, double w, double y) {
        if (cfg_.variant == ControlVariant::J2)
            kc_ = compute_kc(est, cfg_.r).value_or(kc_);
        if (steps_taken_++ < warmup_steps_) {
            w_hist_.push(w);
            y_hist_.push(y);
            u_hist_.push(0.0);
            u_prev_ = 0.0;
            return 0.0;
        }
        switch (cfg_.variant) {
            case ControlVariant::J1: return j1_control(est, w, y);
            case ControlVariant::J2: return j2_control(est, w, y);
            case ControlVariant::General: return general_control(est, w, y);
        }
        throw ConfigError("unknown control variant");
    }

    double j1_control(const ArmaxParameters& est, double w, double y) {
        const DelayPolynomial u_poly{est.b[0] + cfg_.r, est.b[1] - cfg_.r, est.b[2], est.b[3]};
        return run_law(DelayPolynomial::identity(), feedback_poly(est, DelayPolynomial::identity()),
                       u_poly, 0.0, w, y);
    }

    double j2_control(const ArmaxParameters& est, double w, double y) {
        kc_ = compute_kc(est, cfg_.r).value_or(kc_);
        const DelayPolynomial u_poly{est.b[0] + cfg_.r, est.b[1], est.b[2], est.b[3]};
        return run_law(DelayPolynomial{kc_}, feedback_poly(est, DelayPolynomial::identity()),
                       u_poly, 0.0, w, y);
    }

    double general_control(const ArmaxParameters& est, double w, double y) {
        const DelayPolynomial q{cfg_.r, -cfg_.r};
        const DelayPolynomial u_poly = add(est.b_poly(), multiply(q, cfg_.c));
        return run_law(cfg_.c, feedback_poly(est, cfg_.c), u_poly, cfg_.d, w, y);
    }

    [[nodiscard]] double kc() const noexcept { return kc_; }
    [[nodiscard]] double last_command() const noexcept { return u_prev_; }
    [[nodiscard]] long fault_count() const noexcept { return faults_; }
    [[nodiscard]] const ControllerConfig& config() const noexcept { return cfg_; }

    // Mutable history access, for warm starts and for driving the laws
    // directly in tests.
    [[nodiscard]] SignalHistory& y_history() noexcept { return y_hist_; }
    [[nodiscard]] SignalHistory& u_history() noexcept { return u_hist_; }
    [[nodiscard]] SignalHistory& w_history() noexcept { return w_hist_; }

private:
    [[nodiscard]] static std::size_t history_depth(const ControllerConfig& cfg) {
        return std::max<std::size_t>(8, cfg.c.degree() + 2);
    }

    // F = z [C - A_hat]: coefficient k is c_{k+1} - a_hat_{k+1}, covering the
    // longer of the two polynomials. With C = identity this is just -a_hat.
    [[nodiscard]] DelayPolynomial feedback_poly(const ArmaxParameters& est,
                                                const DelayPolynomial& c) const {
        const std::size_t nf = std::max<std::size_t>(c.degree(), 4);
        std::vector<double> f(nf, 0.0);
        for (std::size_t k = 0; k < nf; ++k) {
            const double a_k1 = k < 4 ? est.a[k] : 0.0;
            f[k] = c[k + 1] - a_k1;
        }
        return DelayPolynomial(std::move(f));
    }

    double run_law(const DelayPolynomial& w_poly, const DelayPolynomial& y_poly,
                   const DelayPolynomial& u_poly, double offset, double w, double y) {
        w_hist_.push(w);
        y_hist_.push(y);
        double num = filter(w_poly, w_hist_) - filter(y_poly, y_hist_) - offset;
        const auto& dc = u_poly.coeffs();
        for (std::size_t k = 1; k < dc.size(); ++k) num -= dc[k] * u_hist_[k - 1];

        double u;
        if (std::abs(dc[0]) < kDenominatorEpsilon) {
            ++faults_;          // singular command equation: hold the last command
            u = u_prev_;
        } else {
            u = num / dc[0];
        }
        if (cfg_.u_limits) u = std::clamp(u, cfg_.u_limits->first, cfg_.u_limits->second);
        u_hist_.push(u);
        u_prev_ = u;
        return u;
    }

    ControllerConfig cfg_;
    int warmup_steps_;
    long steps_taken_ = 0;
    SignalHistory y_hist_;
    SignalHistory u_hist_;
    SignalHistory w_hist_;
    double kc_ = 1.0;
    double u_prev_ = 0.0;
    long faults_ = 0;
};

} // namespace stc

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stc/armax_parameters.hpp"
#include "stc/delay_polynomial.hpp"
#include "stc/errors.hpp"
#include "stc/noise.hpp"
#include "stc/signal_history.hpp"

namespace stc {

// Discrete plant description:
//   A(z^-1) y(t) = z^-1 B(z^-1) u(t) + C(z^-1) e(t) + d + v(t)
// with A monic degree 4, B degree 3, C monic stable degree <= 4,
// e white Gaussian with variance sigma2, d a constant output offset and
// v an externally supplied load disturbance entering like d.
struct PlantModel {
    DelayPolynomial a{1.0, 0.0, 0.0, 0.0, 0.0};
    DelayPolynomial b{1.0, 0.0, 0.0, 0.0};
    DelayPolynomial c{1.0};
    double d = 0.0;
    double sigma2 = 0.0;
    std::uint64_t seed = 0;
    std::string rng = kSupportedRng;

    void validate() const {
        if (a.degree() != 4 || !a.monic())
            throw ConfigError("plant output polynomial must be monic with degree 4");
        if (b.degree() != 3)
            throw ConfigError("plant input polynomial must have degree 3");
        if (c.degree() > 4 || !c.monic())
            throw ConfigError("plant noise polynomial must be monic with degree <= 4");
        if (!is_stable(a))
            throw ConfigError("plant output polynomial is unstable");
        if (!is_stable(c))
            throw ConfigError("plant noise polynomial is unstable");
        if (std::abs(eval_at_one(b)) < 1e-12)
            throw ConfigError("plant input polynomial must have nonzero steady-state gain");
        if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
            throw ConfigError("noise variance must be finite and non-negative");
        if (!std::isfinite(d))
            throw ConfigError("constant offset must be finite");
        if (rng != kSupportedRng)
            throw ConfigError("unsupported noise generator '" + rng + "'");
    }

    [[nodiscard]] ArmaxParameters parameters() const {
        ArmaxParameters p;
        for (std::size_t i = 0; i < 4; ++i) p.a[i] = a[i + 1];
        for (std::size_t i = 0; i < 4; ++i) p.b[i] = b[i];
        return p;
    }

    [[nodiscard]] bool operator==(const PlantModel&) const = default;
};

// Stable, minimum-phase fourth-order model with dc gain B(1)/A(1) = 0.51/0.205.
// Serves as the shared baseline plant for scenarios and tests.
[[nodiscard]] inline PlantModel make_default_plant() {
    PlantModel m;
    m.a = DelayPolynomial{1.0, -1.2, 0.5, -0.1, 0.005};
    m.b = DelayPolynomial{0.3, 0.15, 0.05, 0.01};
    m.c = DelayPolynomial{1.0};
    m.d = 0.0;
    m.sigma2 = 1e-8;
    m.seed = 0;
    m.validate();
    return m;
}

// Difference-equation simulator for PlantModel. step(u, v) applies the
// command u and load disturbance v at the current instant and returns the
// output one sample later (the model has a one-step transport delay, so the
// u passed in first affects the y returned by the same call through b0).
class ArmaxPlant {
public:
    explicit ArmaxPlant(PlantModel model)
        : model_(validated(std::move(model))),
          a_tail_({model_.a[1], model_.a[2], model_.a[3], model_.a[4]}),
          noise_(model_.seed),
          y_hist_(4),
          u_hist_(4),
          e_hist_(model_.c.degree() + 1) {}

    double step(double u, double v) {
        if (!std::isfinite(u) || !std::isfinite(v))
            throw SimulationFault("non-finite plant input", t_);
        u_hist_.push(u);
        e_hist_.push(noise_.draw(sigma_));
        const double y = -filter(a_tail_, y_hist_) + filter(model_.b, u_hist_)
                       + filter(model_.c, e_hist_) + model_.d + v;
        if (!std::isfinite(y))
            throw SimulationFault("non-finite plant output", t_);
        y_hist_.push(y);
        ++t_;
        return y;
    }

    [[nodiscard]] double output() const { return y_hist_[0]; }
    [[nodiscard]] double last_noise() const { return e_hist_[0]; }
    [[nodiscard]] long t() const noexcept { return t_; }
    [[nodiscard]] const PlantModel& model() const noexcept { return model_; }

private:
    [[nodiscard]] static PlantModel validated(PlantModel m) {
        m.validate();
        return m;
    }

    PlantModel model_;
    DelayPolynomial a_tail_;   // [a1..a4]: the recursive part of A
    GaussianNoise noise_;
    double sigma_ = std::sqrt(model_.sigma2);
    SignalHistory y_hist_;
    SignalHistory u_hist_;
    SignalHistory e_hist_;
    long t_ = 0;
};

} // namespace stc

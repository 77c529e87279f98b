#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stc/controller.hpp"
#include "stc/errors.hpp"
#include "stc/plant.hpp"
#include "stc/rls.hpp"

namespace stc {

// Piecewise-constant reference signal. w(t) is the value of the latest
// breakpoint at or before t; zero before the first breakpoint.
class ReferenceSchedule {
public:
    using Point = std::pair<long, double>;

    ReferenceSchedule() : points_{{0, 0.0}} {}
    explicit ReferenceSchedule(double constant) : points_{{0, constant}} {}

    explicit ReferenceSchedule(std::vector<Point> points) : points_(std::move(points)) {
        if (points_.empty())
            throw ConfigError("reference schedule needs at least one breakpoint");
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (points_[i].first <= points_[i - 1].first)
                throw ConfigError("reference breakpoints must have strictly increasing times");
        for (const auto& [t, w] : points_)
            if (!std::isfinite(w)) throw ConfigError("reference values must be finite");
    }

    [[nodiscard]] double value(long t) const {
        auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](long lhs, const Point& p) { return lhs < p.first; });
        if (it == points_.begin()) return 0.0;
        return std::prev(it)->second;
    }

    [[nodiscard]] const std::vector<Point>& points() const noexcept { return points_; }

    [[nodiscard]] bool operator==(const ReferenceSchedule&) const = default;

private:
    std::vector<Point> points_;
};

// Additive output load disturbance: zero before step_time, magnitude after.
struct Disturbance {
    long step_time = 1000;
    double magnitude = -0.05;

    [[nodiscard]] double value(long t) const { return t >= step_time ? magnitude : 0.0; }

    [[nodiscard]] bool operator==(const Disturbance&) const = default;
};

// Full description of one closed-loop run.
struct ScenarioConfig {
    PlantModel plant = make_default_plant();
    ControllerConfig controller{};
    RlsConfig estimator{};
    ReferenceSchedule reference{};
    Disturbance disturbance{};
    long steps = 5000;
    std::uint64_t seed = 0;
    std::string output_path{};
    int warmup_steps = 5;      // samples of forced u = 0 while histories fill
    long metrics_skip = 50;    // transient samples excluded from the metrics window
    double settle_band = 0.01; // |y - w| band for settle-time detection

    void validate() const {
        plant.validate();
        controller.validate();
        estimator.validate();
        if (steps < 1) throw ConfigError("run length must be at least one step");
        if (warmup_steps < 0) throw ConfigError("warm-up length must be non-negative");
        if (metrics_skip < 0) throw ConfigError("metrics skip must be non-negative");
        if (!(settle_band > 0.0) || !std::isfinite(settle_band))
            throw ConfigError("settle band must be positive");
        if (!std::isfinite(disturbance.magnitude))
            throw ConfigError("disturbance magnitude must be finite");
        if (disturbance.magnitude != 0.0
            && (disturbance.step_time < 0 || disturbance.step_time >= steps))
            throw ConfigError("disturbance step time must lie inside the run");
    }
};

// One per-sample log row; the CSV schema mirrors this field-for-field.
struct StepRecord {
    long t = 0;
    double w = 0.0;
    double y = 0.0;
    double u = 0.0;
    double v = 0.0;
    double e = 0.0;
    std::array<double, 8> theta{};   // [a1..a4, b0..b3] after this step's update
    std::optional<double> kc{};      // reference compensation gain; J2 runs only
    double eps = 0.0;                // estimator prediction error at this step

    [[nodiscard]] bool finite() const {
        if (!std::isfinite(w) || !std::isfinite(y) || !std::isfinite(u) || !std::isfinite(v)
            || !std::isfinite(e) || !std::isfinite(eps))
            return false;
        for (double th : theta)
            if (!std::isfinite(th)) return false;
        return !kc || std::isfinite(*kc);
    }
};

// Numerical health counters accumulated over a run.
struct RunDiagnostics {
    double max_p_asymmetry = 0.0;
    long estimator_faults = 0;
    long controller_faults = 0;   // singular-denominator holds
};

// Closed-loop certainty-equivalence run. Per sample t:
//   1. the plant produces y(t) from the previous command and disturbance v(t);
//   2. the estimator updates on the regressor built from data through t-1;
//   3. the configured law computes u(t) from the fresh estimate;
//   4. u(t) is applied to the plant on the next iteration.
// The scenario seed governs the noise stream; a seed inside cfg.plant is
// overridden so one knob controls reproducibility.
inline std::vector<StepRecord> run_scenario(const ScenarioConfig& cfg,
                                            RunDiagnostics* diag = nullptr) {
    cfg.validate();

    PlantModel model = cfg.plant;
    model.seed = cfg.seed;
    ArmaxPlant plant(model);
    RlsEstimator estimator(cfg.estimator);
    SelfTuningController controller(cfg.controller, cfg.warmup_steps);
    SignalHistory y_past(4);
    SignalHistory u_past(4);

    std::vector<StepRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.steps));

    double u_prev = 0.0;
    for (long t = 0; t < cfg.steps; ++t) {
        const double v = cfg.disturbance.value(t);
        const double y = plant.step(u_prev, v);
        const double w = cfg.reference.value(t);

        const Vec8 phi = build_regressor(y_past, u_past);
        const RlsUpdate upd = estimator.update(phi, y);
        const double u = controller.step(estimator.estimate(), w, y);

        StepRecord rec;
        rec.t = t;
        rec.w = w;
        rec.y = y;
        rec.u = u;
        rec.v = v;
        rec.e = plant.last_noise();
        rec.theta = estimator.estimate().to_flat();
        if (cfg.controller.variant == ControlVariant::J2) rec.kc = controller.kc();
        rec.eps = upd.eps;
        if (!rec.finite()) throw SimulationFault("non-finite value in step record", t);
        records.push_back(rec);

        y_past.push(y);
        u_past.push(u);
        u_prev = u;
    }

    if (diag) {
        diag->max_p_asymmetry = estimator.max_asymmetry();
        diag->estimator_faults = estimator.fault_count();
        diag->controller_faults = controller.fault_count();
    }
    return records;
}

} // namespace stc

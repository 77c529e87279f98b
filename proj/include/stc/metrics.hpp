#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "stc/errors.hpp"
#include "stc/scenario.hpp"

namespace stc {

// Command variances below this floor make the variance ratio meaningless.
inline constexpr double kVarianceFloor = 1e-30;

// Half-open sample range [begin, end) used for windowed metrics.
struct MetricsWindow {
    long begin = 0;
    long end = 0;
};

struct MetricsReport {
    double sse = 0.0;        // worst |y - w| over the final 10% of the run
    double u_var = 0.0;      // population variance of the command over the window
    long settle_time = -1;   // first t >= settle_from with |y - w| inside the band
                             // through the run end; -1 when it never settles
    double ise = 0.0;        // sum of squared tracking error over the window
    MetricsWindow window{};
};

// Window a scenario's own metrics should use: from disturbance onset (or the
// end of warm-up when no disturbance fires) plus the configured transient
// skip, to the end of the run.
[[nodiscard]] inline MetricsWindow default_window(const ScenarioConfig& cfg) {
    const long base = cfg.disturbance.magnitude != 0.0 ? cfg.disturbance.step_time
                                                       : cfg.warmup_steps;
    return {base + cfg.metrics_skip, cfg.steps};
}

// Reference point for settle-time measurement in a scenario: the disturbance
// onset, or the end of warm-up when no disturbance fires.
[[nodiscard]] inline long settle_origin(const ScenarioConfig& cfg) {
    return cfg.disturbance.magnitude != 0.0 ? cfg.disturbance.step_time : cfg.warmup_steps;
}

[[nodiscard]] inline MetricsReport compute_metrics(const std::vector<StepRecord>& records,
                                                   MetricsWindow window,
                                                   long settle_from = 0,
                                                   double band = 0.01) {
    const long n = static_cast<long>(records.size());
    if (window.begin < 0 || window.end > n || window.begin >= window.end)
        throw ConfigError("metrics window is empty or outside the run");
    if (!(band > 0.0)) throw ConfigError("settle band must be positive");

    MetricsReport rep;
    rep.window = window;

    // Steady-state error: worst deviation over the final tenth of the run.
    const long tail = std::max<long>(1, n / 10);
    for (long t = n - tail; t < n; ++t)
        rep.sse = std::max(rep.sse, std::abs(records[static_cast<std::size_t>(t)].y
                                             - records[static_cast<std::size_t>(t)].w));

    double u_mean = 0.0;
    for (long t = window.begin; t < window.end; ++t)
        u_mean += records[static_cast<std::size_t>(t)].u;
    const double count = static_cast<double>(window.end - window.begin);
    u_mean /= count;
    for (long t = window.begin; t < window.end; ++t) {
        const double du = records[static_cast<std::size_t>(t)].u - u_mean;
        rep.u_var += du * du;
        const double err = records[static_cast<std::size_t>(t)].y
                         - records[static_cast<std::size_t>(t)].w;
        rep.ise += err * err;
    }
    rep.u_var /= count;

    // Settle time: walk back from the run end to the last band violation.
    const long from = std::max<long>(settle_from, 0);
    long last_violation = -1;
    for (long t = n - 1; t >= from; --t) {
        const auto& r = records[static_cast<std::size_t>(t)];
        if (std::abs(r.y - r.w) >= band) {
            last_violation = t;
            break;
        }
    }
    if (last_violation == n - 1) rep.settle_time = -1;
    else if (last_violation < 0) rep.settle_time = from < n ? from : -1;
    else rep.settle_time = last_violation + 1;

    return rep;
}

struct ComparisonReport {
    MetricsReport first;
    MetricsReport second;
    // u_var(second) / u_var(first); empty when the denominator is degenerate.
    std::optional<double> variance_ratio;
};

// Two scenarios are comparable when they differ in nothing but the control
// variant; output paths are exempt because they only steer file export.
inline void validate_comparable(const ScenarioConfig& a, const ScenarioConfig& b) {
    if (!(a.plant == b.plant)) throw ConfigError("compared scenarios differ in plant model");
    if (!(a.estimator == b.estimator))
        throw ConfigError("compared scenarios differ in estimator settings");
    if (!(a.reference == b.reference))
        throw ConfigError("compared scenarios differ in reference schedule");
    if (!(a.disturbance == b.disturbance))
        throw ConfigError("compared scenarios differ in disturbance");
    if (a.steps != b.steps || a.seed != b.seed || a.warmup_steps != b.warmup_steps
        || a.metrics_skip != b.metrics_skip || a.settle_band != b.settle_band)
        throw ConfigError("compared scenarios differ in run settings");
    if (a.controller.r != b.controller.r || !(a.controller.c == b.controller.c)
        || a.controller.d != b.controller.d || a.controller.u_limits != b.controller.u_limits)
        throw ConfigError("compared scenarios differ in controller settings beyond the variant");
}

[[nodiscard]] inline ComparisonReport make_comparison(const ScenarioConfig& a,
                                                      const ScenarioConfig& b,
                                                      const std::vector<StepRecord>& ra,
                                                      const std::vector<StepRecord>& rb) {
    ComparisonReport rep;
    rep.first = compute_metrics(ra, default_window(a), settle_origin(a), a.settle_band);
    rep.second = compute_metrics(rb, default_window(b), settle_origin(b), b.settle_band);
    if (rep.first.u_var > kVarianceFloor)
        rep.variance_ratio = rep.second.u_var / rep.first.u_var;
    return rep;
}

// Runs both scenarios and reports side-by-side metrics plus the command
// variance ratio u_var(second) / u_var(first).
[[nodiscard]] inline ComparisonReport compare(const ScenarioConfig& a, const ScenarioConfig& b) {
    validate_comparable(a, b);
    const auto ra = run_scenario(a);
    const auto rb = run_scenario(b);
    return make_comparison(a, b, ra, rb);
}

} // namespace stc

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "stc/controller.hpp"
#include "stc/plant.hpp"

using namespace stc;
using Catch::Approx;

namespace {

ArmaxParameters est_with(std::initializer_list<double> a, std::initializer_list<double> b) {
    ArmaxParameters p;
    std::size_t i = 0;
    for (double v : a) p.a[i++] = v;
    i = 0;
    for (double v : b) p.b[i++] = v;
    return p;
}

SelfTuningController make_controller(ControlVariant variant, double r,
                                     DelayPolynomial c = DelayPolynomial::identity(),
                                     double d = 0.0) {
    ControllerConfig cfg;
    cfg.variant = variant;
    cfg.r = r;
    cfg.c = std::move(c);
    cfg.d = d;
    return SelfTuningController(cfg, /*warmup_steps=*/0);
}

} // namespace

TEST_CASE("compute_kf inverse dc gain") {
    REQUIRE(*compute_kf(est_with({}, {1.0})) == 1.0);
    REQUIRE(*compute_kf(est_with({-0.5}, {1.0})) == 0.5);
    REQUIRE(*compute_kf(est_with({}, {0.5, 0.5})) == 1.0);
    REQUIRE_FALSE(compute_kf(est_with({}, {1e-7})).has_value());
}

TEST_CASE("compute_kc reference compensation gain") {
    REQUIRE(*compute_kc(est_with({-0.3, 0.1}, {0.5, 0.25}), 0.0) == 1.0);
    REQUIRE(*compute_kc(est_with({1.0}, {1.0}), 0.01) == Approx(1.02).epsilon(1e-15));
    REQUIRE(*compute_kc(est_with({}, {1.0}), 0.01) == Approx(1.01).epsilon(1e-15));
    REQUIRE_FALSE(compute_kc(est_with({}, {1e-9}), 0.01).has_value());

    // Direct-formula identity on randomized estimates.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ArmaxParameters p;
        for (auto& x : p.a) x = val(rng);
        for (auto& x : p.b) x = val(rng);
        if (std::abs(p.b_at_one()) < 1e-3) continue;
        const double r = 0.25 * (val(rng) + 1.0);
        const double direct = 1.0 + r * ((1.0 + p.a[0] + p.a[1] + p.a[2] + p.a[3])
                                         / (p.b[0] + p.b[1] + p.b[2] + p.b[3]));
        REQUIRE(*compute_kc(p, r) == direct);
    }
}

TEST_CASE("j1 law hand examples") {
    // Pure-gain model, unit reference.
    auto c1 = make_controller(ControlVariant::J1, 0.0);
    REQUIRE(c1.j1_control(est_with({}, {1.0}), 1.0, 0.0) == 1.0);

    // First-order output feedback.
    auto c2 = make_controller(ControlVariant::J1, 0.0);
    REQUIRE(c2.j1_control(est_with({-0.5}, {1.0}), 0.0, 1.0) == -0.5);

    // Penalty differencing reaches back to the previous command.
    auto c3 = make_controller(ControlVariant::J1, 0.01);
    c3.u_history().push(1.0);
    REQUIRE(c3.j1_control(est_with({}, {1.0}), 0.0, 0.0)
            == Approx(0.01 / 1.01).epsilon(1e-15));
}

TEST_CASE("j2 law hand examples") {
    auto c1 = make_controller(ControlVariant::J2, 0.0);
    REQUIRE(c1.j2_control(est_with({}, {1.0}), 1.0, 0.0) == 1.0);
    REQUIRE(c1.kc() == 1.0);

    auto c2 = make_controller(ControlVariant::J2, 0.01);
    const double u = c2.j2_control(est_with({-0.5}, {1.0}), 1.0, 1.0);
    REQUIRE(c2.kc() == Approx(1.005).epsilon(1e-15));
    REQUIRE(u == Approx(0.5).epsilon(1e-12));   // y = w = steady state gives u = kf * w
}

TEST_CASE("j2 steady-state consistency identity") {
    const ArmaxParameters truth = make_default_plant().parameters();
    const double w0 = 0.7;
    const double kf = *compute_kf(truth);

    auto ctl = make_controller(ControlVariant::J2, 0.01);
    ctl.y_history().fill(w0);
    ctl.w_history().fill(w0);
    ctl.u_history().fill(kf * w0);
    const double u = ctl.j2_control(truth, w0, w0);
    REQUIRE(u == Approx(kf * w0).epsilon(1e-9));
}

TEST_CASE("general law hand examples") {
    // Constant offset subtracts from the numerator.
    auto c1 = make_controller(ControlVariant::General, 0.0, DelayPolynomial::identity(), 0.1);
    REQUIRE(c1.general_control(est_with({}, {1.0}), 1.0, 0.0) == Approx(0.9).epsilon(1e-15));

    // Colored-noise feedback polynomial F = z[C - A].
    auto c2 = make_controller(ControlVariant::General, 0.0, DelayPolynomial{1.0, 0.5});
    REQUIRE(c2.general_control(est_with({-0.2}, {1.0}), 0.0, 1.0)
            == Approx(-0.7).epsilon(1e-15));
}

TEST_CASE("general law with identity noise polynomial reduces to j1 exactly") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::uniform_real_distribution<double> rval(0.0, 0.5);
    for (int batch = 0; batch < 20; ++batch) {
        const double r = rval(rng);
        auto j1 = make_controller(ControlVariant::J1, r);
        auto gen = make_controller(ControlVariant::General, r);
        for (int t = 0; t < 100; ++t) {
            ArmaxParameters p;
            for (auto& x : p.a) x = val(rng);
            for (auto& x : p.b) x = val(rng);
            const double w = val(rng);
            const double y = val(rng);
            const double u_j1 = j1.step(p, w, y);
            const double u_gen = gen.step(p, w, y);
            REQUIRE(u_j1 == u_gen);
        }
    }
}

TEST_CASE("singular denominator holds the previous command") {
    auto ctl = make_controller(ControlVariant::J1, 0.01);
    ctl.j1_control(est_with({}, {1.0}), 1.0, 0.0);   // u = 1/1.01
    const double held = ctl.last_command();
    REQUIRE(ctl.fault_count() == 0);

    // b0 + r collapses below the safety floor.
    const double u = ctl.j1_control(est_with({}, {-0.01}), 5.0, 1.0);
    REQUIRE(u == held);
    REQUIRE(ctl.fault_count() == 1);
}

TEST_CASE("command saturation clamps the law output") {
    ControllerConfig cfg;
    cfg.variant = ControlVariant::J1;
    cfg.r = 0.0;
    cfg.u_limits = std::pair{-0.1, 0.1};
    SelfTuningController ctl(cfg, 0);
    REQUIRE(ctl.j1_control(est_with({}, {1.0}), 5.0, 0.0) == 0.1);
    REQUIRE(ctl.j1_control(est_with({}, {1.0}), -5.0, 0.0) == -0.1);
}

TEST_CASE("warm-up emits zero commands while histories fill") {
    ControllerConfig cfg;
    cfg.variant = ControlVariant::J2;
    cfg.r = 0.01;
    SelfTuningController ctl(cfg, 5);
    const ArmaxParameters truth = make_default_plant().parameters();
    for (int t = 0; t < 5; ++t) REQUIRE(ctl.step(truth, 1.0, 0.0) == 0.0);
    REQUIRE(ctl.kc() == Approx(*compute_kc(truth, 0.01)));   // gains track during warm-up
    REQUIRE(ctl.step(truth, 1.0, 0.0) != 0.0);
}

TEST_CASE("kc holds its last value across degenerate estimates") {
    auto ctl = make_controller(ControlVariant::J2, 0.01);
    ctl.j2_control(est_with({}, {1.0}), 1.0, 0.0);
    REQUIRE(ctl.kc() == Approx(1.01).epsilon(1e-15));
    ctl.j2_control(est_with({}, {1e-9}), 1.0, 0.0);   // B(1) degenerate
    REQUIRE(ctl.kc() == Approx(1.01).epsilon(1e-15));
    REQUIRE(std::isfinite(ctl.last_command()));
}

TEST_CASE("controller configuration validation") {
    ControllerConfig cfg;
    cfg.r = -0.1;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);

    cfg = ControllerConfig{};
    cfg.c = DelayPolynomial{2.0, 1.0};               // not monic
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);

    cfg = ControllerConfig{};
    cfg.variant = ControlVariant::General;
    cfg.c = DelayPolynomial{1.0, -2.0};              // unstable
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);

    cfg.variant = ControlVariant::J1;                // C unused by the J1 law
    REQUIRE_NOTHROW(cfg.validate());

    cfg = ControllerConfig{};
    cfg.u_limits = std::pair{1.0, -1.0};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);

    REQUIRE_THROWS_AS(SelfTuningController(ControllerConfig{}, -1), ConfigError);
}

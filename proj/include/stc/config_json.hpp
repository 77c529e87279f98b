#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stc/errors.hpp"
#include "stc/scenario.hpp"

namespace stc {

namespace detail {

using nlohmann::json;

// Fail fast on typos: every key of obj must appear in allowed.
inline void check_keys(const json& obj, const char* where,
                       std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        throw ConfigError(std::string(where) + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

inline double as_number(const json& v, const std::string& what) {
    if (!v.is_number())
        throw ConfigError(what + " must be a number");
    return v.get<double>();
}

inline long as_integer(const json& v, const std::string& what) {
    if (!v.is_number_integer())
        throw ConfigError(what + " must be an integer");
    return v.get<long>();
}

inline std::uint64_t as_seed(const json& v, const std::string& what) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto s = v.get<long long>();
        if (s < 0) throw ConfigError(what + " must be non-negative");
        return static_cast<std::uint64_t>(s);
    }
    throw ConfigError(what + " must be a non-negative integer");
}

inline std::vector<double> as_number_array(const json& v, const std::string& what) {
    if (!v.is_array() || v.empty())
        throw ConfigError(what + " must be a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(as_number(e, "entry of " + what));
    return out;
}

inline void parse_plant(const json& j, PlantModel& plant) {
    check_keys(j, "plant", {"a", "b", "c", "d", "sigma2", "seed", "rng"});
    if (j.contains("a")) plant.a = DelayPolynomial(as_number_array(j["a"], "plant.a"));
    if (j.contains("b")) plant.b = DelayPolynomial(as_number_array(j["b"], "plant.b"));
    if (j.contains("c")) plant.c = DelayPolynomial(as_number_array(j["c"], "plant.c"));
    if (j.contains("d")) plant.d = as_number(j["d"], "plant.d");
    if (j.contains("sigma2")) plant.sigma2 = as_number(j["sigma2"], "plant.sigma2");
    if (j.contains("seed")) plant.seed = as_seed(j["seed"], "plant.seed");
    if (j.contains("rng")) {
        if (!j["rng"].is_string()) throw ConfigError("plant.rng must be a string");
        plant.rng = j["rng"].get<std::string>();
    }
}

inline void parse_controller(const json& j, ControllerConfig& ctl) {
    check_keys(j, "controller", {"variant", "r", "c", "d", "u_limits"});
    if (j.contains("variant")) {
        if (!j["variant"].is_string())
            throw ConfigError("controller.variant must be a string");
        const auto name = j["variant"].get<std::string>();
        if (name == "J1") ctl.variant = ControlVariant::J1;
        else if (name == "J2") ctl.variant = ControlVariant::J2;
        else if (name == "GENERAL") ctl.variant = ControlVariant::General;
        else throw ConfigError("controller.variant must be one of J1, J2, GENERAL");
    }
    if (j.contains("r")) ctl.r = as_number(j["r"], "controller.r");
    if (j.contains("c")) ctl.c = DelayPolynomial(as_number_array(j["c"], "controller.c"));
    if (j.contains("d")) ctl.d = as_number(j["d"], "controller.d");
    if (j.contains("u_limits")) {
        const auto& lim = j["u_limits"];
        if (lim.is_null()) {
            ctl.u_limits.reset();
        } else {
            if (!lim.is_array() || lim.size() != 2)
                throw ConfigError("controller.u_limits must be [min, max] or null");
            ctl.u_limits = std::pair{as_number(lim[0], "controller.u_limits[0]"),
                                     as_number(lim[1], "controller.u_limits[1]")};
        }
    }
}

inline void parse_estimator(const json& j, RlsConfig& est) {
    check_keys(j, "estimator",
               {"theta0", "p0_scale", "P0_scale", "lambda", "min_excitation"});
    if (j.contains("theta0")) {
        const auto v = as_number_array(j["theta0"], "estimator.theta0");
        if (v.size() != ArmaxParameters::kCount)
            throw ConfigError("estimator.theta0 must hold exactly 8 numbers");
        for (std::size_t i = 0; i < v.size(); ++i) est.theta0[i] = v[i];
    }
    if (j.contains("p0_scale") && j.contains("P0_scale"))
        throw ConfigError("estimator: give either p0_scale or P0_scale, not both");
    if (j.contains("p0_scale")) est.p0_scale = as_number(j["p0_scale"], "estimator.p0_scale");
    if (j.contains("P0_scale")) est.p0_scale = as_number(j["P0_scale"], "estimator.P0_scale");
    if (j.contains("lambda")) est.lambda = as_number(j["lambda"], "estimator.lambda");
    if (j.contains("min_excitation"))
        est.min_excitation = as_number(j["min_excitation"], "estimator.min_excitation");
}

inline void parse_reference(const json& j, ReferenceSchedule& ref) {
    if (j.is_number()) {
        ref = ReferenceSchedule(j.get<double>());
        return;
    }
    if (!j.is_array())
        throw ConfigError("reference must be a number or an array of breakpoints");
    std::vector<ReferenceSchedule::Point> pts;
    pts.reserve(j.size());
    for (const auto& e : j) {
        if (e.is_array() && e.size() == 2) {
            pts.emplace_back(as_integer(e[0], "reference breakpoint time"),
                             as_number(e[1], "reference breakpoint value"));
        } else if (e.is_object()) {
            check_keys(e, "reference breakpoint", {"t", "w"});
            if (!e.contains("t") || !e.contains("w"))
                throw ConfigError("reference breakpoint needs both t and w");
            pts.emplace_back(as_integer(e["t"], "reference breakpoint time"),
                             as_number(e["w"], "reference breakpoint value"));
        } else {
            throw ConfigError("reference breakpoint must be [t, w] or {\"t\": ..., \"w\": ...}");
        }
    }
    ref = ReferenceSchedule(std::move(pts));
}

inline void parse_disturbance(const json& j, Disturbance& dist) {
    check_keys(j, "disturbance", {"step_time", "magnitude"});
    if (j.contains("step_time"))
        dist.step_time = as_integer(j["step_time"], "disturbance.step_time");
    if (j.contains("magnitude"))
        dist.magnitude = as_number(j["magnitude"], "disturbance.magnitude");
}

} // namespace detail

// Minimum run length accepted from scenario files. Programmatic callers may
// run shorter diagnostics; files describe study cases, which must be long
// enough for the metrics windows to mean anything.
inline constexpr long kMinScenarioFileSteps = 100;

// Parses a scenario from its JSON document. Every field mirrors
// ScenarioConfig; absent keys keep their defaults; unknown keys are rejected.
[[nodiscard]] inline ScenarioConfig scenario_from_json(const nlohmann::json& root) {
    ScenarioConfig cfg;
    try {
        detail::check_keys(root, "scenario",
                           {"plant", "controller", "estimator", "reference", "disturbance",
                            "steps", "seed", "output_path", "warmup_steps", "metrics_skip",
                            "settle_band"});
        if (root.contains("plant")) detail::parse_plant(root["plant"], cfg.plant);
        if (root.contains("controller")) detail::parse_controller(root["controller"], cfg.controller);
        if (root.contains("estimator")) detail::parse_estimator(root["estimator"], cfg.estimator);
        if (root.contains("reference")) detail::parse_reference(root["reference"], cfg.reference);
        if (root.contains("disturbance")) detail::parse_disturbance(root["disturbance"], cfg.disturbance);
        if (root.contains("steps")) cfg.steps = detail::as_integer(root["steps"], "steps");
        if (root.contains("seed")) cfg.seed = detail::as_seed(root["seed"], "seed");
        if (root.contains("output_path")) {
            if (!root["output_path"].is_string())
                throw ConfigError("output_path must be a string");
            cfg.output_path = root["output_path"].get<std::string>();
        }
        if (root.contains("warmup_steps"))
            cfg.warmup_steps = static_cast<int>(detail::as_integer(root["warmup_steps"], "warmup_steps"));
        if (root.contains("metrics_skip"))
            cfg.metrics_skip = detail::as_integer(root["metrics_skip"], "metrics_skip");
        if (root.contains("settle_band"))
            cfg.settle_band = detail::as_number(root["settle_band"], "settle_band");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed scenario document: ") + e.what());
    }
    if (cfg.steps < kMinScenarioFileSteps)
        throw ConfigError("steps must be at least " + std::to_string(kMinScenarioFileSteps)
                          + " in a scenario file");
    cfg.validate();
    return cfg;
}

[[nodiscard]] inline ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    return scenario_from_json(root);
}

} // namespace stc

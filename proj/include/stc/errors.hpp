#pragma once

#include <stdexcept>
#include <string>

namespace stc {

// Invalid configuration or violated precondition of a documented interface.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A running simulation produced or received a non-finite value; carries the
// step index at which the fault was detected.
class SimulationFault : public std::runtime_error {
public:
    SimulationFault(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    [[nodiscard]] long step() const noexcept { return step_; }

private:
    long step_;
};

} // namespace stc

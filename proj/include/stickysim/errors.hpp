#pragma once

#include <stdexcept>
#include <string>

namespace stickysim {

/// Malformed scenario, trajectory, or generator parameters (CLI exit 2).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Event cascade or search exceeded its configured budget (CLI exit 3).
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stickysim

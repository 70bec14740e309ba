#pragma once

#include <stdexcept>
#include <string>

namespace edgetrack {

/// Malformed or unreadable input (files, configs, CLI arguments). CLI exit code 1.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario exceeds the model's operating assumptions (for example a node so
/// loaded that even color-only matching misses its deadline). CLI exit code 2.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edgetrack

#pragma once

#include <stdexcept>
#include <string>

namespace satqkd {

// Bad or inconsistent user input (config files, CLI values, protocol
// parameters). Maps to exit code 2 in the CLI.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the validity domain of the physical model (e.g. zenith
// angle beyond the flat-slab limit). Maps to exit code 3.
struct physics_error : std::runtime_error {
  explicit physics_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure or infeasibility inside the key-rate solver.
// Maps to exit code 4.
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace satqkd

#pragma once

#include <stdexcept>
#include <string>

namespace htsl {

// Raised when a numerical accuracy guard trips (kernel truncation too
// coarse, grid too coarse, divergent series where convergence is required).
// The CLI maps this to exit code 3; configuration errors map to exit code 2.
class guard_error : public std::runtime_error {
public:
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace htsl

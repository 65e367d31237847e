#pragma once

#include <stdexcept>
#include <string>

namespace popindex {

// Bad inputs: malformed datasets, out-of-domain hyperparameters, schema errors.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The computation could not proceed (e.g. no finite starting point found).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A harvest strategy target cannot be met at any feasible harvest.
struct InfeasibleStrategyError : std::runtime_error {
  explicit InfeasibleStrategyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace popindex

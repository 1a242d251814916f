#pragma once

#include <stdexcept>
#include <string>

namespace apl {

/// Bad input: malformed files, out-of-range parameters, dimension mismatches.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that cannot meet its contract: divergent kernels,
/// tolerances that cannot be reached within the configured caps.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace apl

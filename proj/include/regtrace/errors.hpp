#pragma once

#include <stdexcept>
#include <string>

namespace regtrace {

/// Bad input: violated precondition, malformed data, wrong dimensions.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure did not reach its declared accuracy.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace regtrace

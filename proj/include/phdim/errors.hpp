#pragma once

#include <stdexcept>
#include <string>

namespace phdim {

/// Invalid argument or shape parameter.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A computation would exceed a configured memory, size or time budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested feature outside the supported range (e.g. homology above dimension 2).
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Not enough usable data for a regression.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace phdim

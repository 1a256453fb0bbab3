#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bipsize {

/// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range vertex, mismatched set universe, unparsable file.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// A pair operation was handed the same vertex twice.
class DegeneratePair : public Error {
 public:
  using Error::Error;
};

/// An exact engine would exceed its configured work or memory budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Bad configuration value or generator spec.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bipsize

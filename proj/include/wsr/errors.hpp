#pragma once

#include <stdexcept>
#include <string>

namespace wsr {

/// Dimension of an index, point, or coefficient vector does not match its container.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size limit (cardinality, matrix entries, radius) would be exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Invalid experiment configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates an operation's precondition (NaN data, infeasible point, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wsr

#pragma once

#include <stdexcept>
#include <string>

namespace skewvnj {

/// Invalid construction parameters (non-invertible matrix, bad search config, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested an exact dual for a norm family that has none implemented.
class UnsupportedDualError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed norm descriptor or polytope file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skewvnj

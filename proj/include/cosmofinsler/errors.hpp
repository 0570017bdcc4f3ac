#pragma once

#include <stdexcept>
#include <string>

namespace cosmofinsler {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A profile or constructor parameter violates a family constraint.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain where the profile is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Finsler metric (or a quantity dividing by one of its factors)
/// is degenerate at the requested point.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or an empty sampling grid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two evaluation routes that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace cosmofinsler

#pragma once

#include <stdexcept>
#include <string>

namespace friedrichs {

// Argument outside the mathematical domain of an operation (m not in (0, Λ),
// negative coupling, invalid correlation degree, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Components or matrices defined on incompatible grids / sizes.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Eigendecomposition failure, non-finite results, internal cross-check mismatch.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input samples unusable for a fit (too few, nonpositive survival in window).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent job configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace friedrichs

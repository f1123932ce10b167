#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpm {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a precondition: wrong dimension, degenerate parameters.
class ContractError : public Error {
 public:
  using Error::Error;
};

class EmptyBatchError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// The requested oracle needs data the set does not carry (charts, normals).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures. Distinct from contract errors so the CLI can map
/// them to their own exit status.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class OptimizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSetError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ContractError(std::string(what) + ": expected dimension " + std::to_string(want) +
                        ", got " + std::to_string(got));
  }
}

}  // namespace gpm

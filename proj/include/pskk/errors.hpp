#pragma once

#include <stdexcept>
#include <string>

namespace pskk {

//! Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Bernoulli degree or smoothness order outside the supported exact range.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

//! Evaluation point outside the kernel's box domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

//! Generating vector or point count does not define a valid rank-1 lattice.
class InvalidLatticeError : public Error {
 public:
  using Error::Error;
};

//! Sample contains a non-finite coordinate.
class InvalidSampleError : public Error {
 public:
  using Error::Error;
};

//! Inconsistent parameters between cooperating components.
class ConfigError : public Error {
 public:
  using Error::Error;
};

//! Operation requires lattice-sourced nodes (circulant structure).
class StructureError : public Error {
 public:
  using Error::Error;
};

//! Sample size too small for the parameter schedule's admissibility bound.
class ScheduleUnderflowError : public Error {
 public:
  using Error::Error;
};

//! Data degenerate for the requested estimator (e.g. zero variance).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

//! Numerical contract violated at runtime.
class NumericError : public Error {
 public:
  using Error::Error;
};

//! Circulant symbol too close to singular to divide by.
class IllConditionedError : public NumericError {
 public:
  IllConditionedError(const std::string& msg, double min_symbol_modulus)
      : NumericError(msg), min_symbol_modulus_(min_symbol_modulus) {}

  double min_symbol_modulus() const { return min_symbol_modulus_; }

 private:
  double min_symbol_modulus_;
};

//! File could not be read or does not match the expected format.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pskk

#pragma once

#include <stdexcept>
#include <string>

namespace tailcausal {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid parameter or configuration (CLI exit code 1).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Problems with the data itself (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

/// No row exceeds its marginal threshold.
class NoExtremeEventsError : public DataError {
 public:
  using DataError::DataError;
};

/// Too few observations for the requested operation.
class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// Malformed input file.
class ParseError : public DataError {
 public:
  using DataError::DataError;
};

/// Numerical failure (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Marginal GP fit did not converge; message carries diagnostics.
class FitFailureError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// All margins are (numerically) equally close to Exp(1).
class NonIdentifiableError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Importance resampling pool collapsed onto a few heavy weights.
class HeavyWeightError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace tailcausal

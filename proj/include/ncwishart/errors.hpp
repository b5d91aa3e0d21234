#pragma once

#include <stdexcept>
#include <string>

namespace ncwishart {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong shapes, negative shapes, asymmetric matrices,
// out-of-range ranks.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Operation is well defined only for a subclass of parameters (e.g. invertible
// scale) and the given parameters fall outside it.
class UnsupportedParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A documented precondition of a sampler or solver was not met by the caller.
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class SingularityError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace ncwishart

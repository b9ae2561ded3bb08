#ifndef CONTCOUNT_ERRORS_H_
#define CONTCOUNT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace contcount {

// Base class for every error raised by the library. The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric parameter is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data (update vectors, instances, traces, files) is malformed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Operation is invalid in the object's current state, e.g. past the horizon.
class StateError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds the exact solver's enumeration budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Unknown registered name (scenario, scripted strategy, named instance).
class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace contcount

#endif  // CONTCOUNT_ERRORS_H_

#pragma once

#include <stdexcept>
#include <string>

namespace xyzent {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain model input.
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// An iterative numeric routine did not converge.
class NumericFailure : public Error {
public:
  using Error::Error;
};

/// Two independent evaluation routes disagree.
class InternalInconsistency : public Error {
public:
  using Error::Error;
};

/// Density-matrix elements that do not describe a valid state.
class InvalidState : public Error {
public:
  using Error::Error;
};

/// Malformed sweep/axis specification.
class InvalidSpec : public Error {
public:
  using Error::Error;
};

/// A predicate evaluated outside the region where it has meaning.
class UndefinedCondition : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace xyzent

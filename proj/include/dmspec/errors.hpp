#pragma once

#include <stdexcept>
#include <string>

namespace dmspec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact 128-bit computation would overflow.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A two-sided potential was requested without backward digits.
class MissingDigits : public Error {
 public:
  using Error::Error;
};

/// Both singular values of a cocycle product agree, so no direction is contracted.
class DegenerateSingularValues : public Error {
 public:
  using Error::Error;
};

class RootBracketingFailure : public Error {
 public:
  using Error::Error;
};

class EmptyGapGrid : public Error {
 public:
  using Error::Error;
};

/// A sub-step of the argument tracker moved too far to be lifted unambiguously.
class LiftingAmbiguity : public Error {
 public:
  using Error::Error;
};

/// The energy lies in the spectrum; the stable section does not exist.
class NotHyperbolic : public Error {
 public:
  using Error::Error;
};

}  // namespace dmspec

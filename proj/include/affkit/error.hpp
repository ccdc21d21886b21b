#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affkit {

// Base of every error the library throws. The CLI maps subclasses onto exit
// codes: InputError -> 2, VerificationError -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class VerificationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Divisor did not normalize to a unit monomial x1^m * cos(x1)^c.
class DivisionError : public ParseError {
 public:
  using ParseError::ParseError;
};

class NotExactlyEvaluable : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class BadBasepoint : public InputError {
 public:
  using InputError::InputError;
};

class NoStabilization : public Error {
 public:
  using Error::Error;
};

class SolveFailure : public Error {
 public:
  using Error::Error;
};

class NotHomogeneousCandidate : public VerificationError {
 public:
  using VerificationError::VerificationError;
};

class ClassificationInconclusive : public VerificationError {
 public:
  using VerificationError::VerificationError;
};

class DomainExit : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace affkit

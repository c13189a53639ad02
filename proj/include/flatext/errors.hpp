#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flatext {

// Base class for everything thrown by this library. The CLI maps subclasses
// onto its exit-code contract: input errors exit 2, property failures exit 1.
class Error : public std::runtime_error {
 public:
  explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Input-shaped errors (CLI exit 2).
class ParseError : public Error {
 public:
  using Error::Error;
};

class MissingMomentError : public ParseError {
 public:
  MissingMomentError(std::string msg, std::vector<std::vector<int>> absent)
      : ParseError(std::move(msg)), absent_exponents(std::move(absent)) {}
  std::vector<std::vector<int>> absent_exponents;
};

class InconsistentInputError : public ParseError {
 public:
  using ParseError::ParseError;
};

class MissingRuleError : public ParseError {
 public:
  MissingRuleError(std::string msg, std::vector<int> border)
      : ParseError(std::move(msg)), border_exponents(std::move(border)) {}
  std::vector<int> border_exponents;
};

// Property failures on well-formed input (CLI exit 1).
class NotFlatError : public Error {
 public:
  using Error::Error;
};

class NotConnectedError : public Error {
 public:
  using Error::Error;
};

class InconsistentExtensionError : public Error {
 public:
  using Error::Error;
};

class NotPositiveError : public Error {
 public:
  using Error::Error;
};

// Internal-contract violations. These indicate either misuse of the API or
// an inconsistency the theory says cannot occur on honest input.
class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

class NotInSpanError : public Error {
 public:
  using Error::Error;
};

class ZeroFormDetectedError : public Error {
 public:
  using Error::Error;
};

class CommutationUnverifiedError : public Error {
 public:
  using Error::Error;
};

class DegenerateCombinationError : public Error {
 public:
  using Error::Error;
};

class SingularWeightSystemError : public Error {
 public:
  using Error::Error;
};

}  // namespace flatext

#pragma once

#include <stdexcept>
#include <string>

namespace cfrac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or JSON document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An optimisation routine failed to produce a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfrac

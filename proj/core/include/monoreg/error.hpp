#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace monoreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points, boxes, grids or signatures of incompatible dimension or shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain on which an operation is defined
/// (point outside the box, nonpositive weight, value outside a Bregman interval).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Lower/upper-set enumeration refused because the grid is too large.
class EnumerationLimitError : public Error {
 public:
  using Error::Error;
};

/// Malformed grid-function file. `line()` is 1-based; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An iterative procedure ran out of budget. Carries the last two iterates.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace monoreg

#pragma once

#include <stdexcept>
#include <string>

namespace ncspec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A weight expression could not be evaluated at a Fock level.
class EvalError : public Error {
 public:
  EvalError(long level, const std::string& what)
      : Error("evaluation failed at level " + std::to_string(level) + ": " + what),
        level_(level) {}
  long level() const noexcept { return level_; }

 private:
  long level_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& expected)
      : Error("parse error at position " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(expected) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class PivotSingular : public Error {
 public:
  using Error::Error;
};

class Inconsistent : public Error {
 public:
  using Error::Error;
};

class UnsupportedDivision : public Error {
 public:
  using Error::Error;
};

class VandermondeSingular : public Error {
 public:
  using Error::Error;
};

class RootNotFound : public Error {
 public:
  using Error::Error;
};

class RootRejected : public Error {
 public:
  using Error::Error;
};

class UnsupportedFunction : public Error {
 public:
  using Error::Error;
};

}  // namespace ncspec

#pragma once

#include <stdexcept>
#include <string>

namespace morpho {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pitch too close to +-90 deg for the ZYX Euler-rate map.
class SingularAttitude : public Error {
 public:
  using Error::Error;
};

class InvalidLegIndex : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The OCP objective evaluated to NaN or Inf.
class NonFiniteCost : public Error {
 public:
  using Error::Error;
};

class ScenarioInvalid : public Error {
 public:
  using Error::Error;
};

/// A structural problem in a configuration document (syntax, unknown key,
/// wrong value type). `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string field, int line)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

/// A value that parsed but violates a documented invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyLog : public Error {
 public:
  using Error::Error;
};

}  // namespace morpho

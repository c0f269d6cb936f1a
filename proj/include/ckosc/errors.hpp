#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ckosc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSignature : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

/// A nilpotent unit does not divide the operand (e.g. 1 / iota2).
class NonDivisible : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Negative powers of a nilpotent parameter survived fiber restriction.
class IndefiniteExpression : public Error {
 public:
  IndefiniteExpression(std::vector<std::string> monomials, const std::string& what)
      : Error(what), monomials_(std::move(monomials)) {}

  const std::vector<std::string>& monomials() const noexcept { return monomials_; }

 private:
  std::vector<std::string> monomials_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class FiberConstraintViolated : public Error {
 public:
  using Error::Error;
};

/// Quantities with different physical-dimension tags were combined.
class DimensionTagMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidStep : public Error {
 public:
  using Error::Error;
};

class InvalidInitialCondition : public Error {
 public:
  using Error::Error;
};

class ClockMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ckosc

#pragma once

#include <stdexcept>
#include <string>

namespace srirnn {

/// Base of every error raised by the library. `code()` is a short stable
/// identifier used in the CLI's machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// A tensor or buffer does not have the shape its context requires.
class ShapeError : public Error {
 public:
  ShapeError(std::string tensor, std::string expected, std::string actual)
      : Error("shape_mismatch", "shape mismatch for '" + tensor + "': expected " + expected +
                                    ", got " + actual),
        tensor_(std::move(tensor)),
        expected_(std::move(expected)),
        actual_(std::move(actual)) {}

  const std::string& tensor() const noexcept { return tensor_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& actual() const noexcept { return actual_; }

 private:
  std::string tensor_;
  std::string expected_;
  std::string actual_;
};

/// Sample-rate preconditions violated (wrong rate, M < 1, inconsistent M).
class RateError : public Error {
 public:
  explicit RateError(const std::string& message) : Error("rate_mismatch", message) {}
};

/// Malformed input file or value.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse_error", message) {}
};

/// Argument outside an operation's domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain_error", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io_error", message) {}
};

}  // namespace srirnn

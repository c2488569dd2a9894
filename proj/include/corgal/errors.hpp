#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corgal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed formula text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string message,
             std::vector<std::string> expected = {})
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line), column_(column), message_(std::move(message)), expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::vector<std::string> expected_;
};

// An epistemic model (or its document) violates a structural invariant.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Formula mentions an agent or atom the model does not declare.
class UndeclaredSymbol : public Error {
 public:
  using Error::Error;
};

class EnumerationCapExceeded : public Error {
 public:
  EnumerationCapExceeded(std::uint64_t required, std::uint64_t cap)
      : Error("choice-set enumeration needs " + std::to_string(required) +
              " decompositions, cap is " + std::to_string(cap)),
        required_(required), cap_(cap) {}
  std::uint64_t required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

class NotQuantified : public Error {
 public:
  using Error::Error;
};

class StratumError : public Error {
 public:
  using Error::Error;
};

class MissingBinding : public Error {
 public:
  using Error::Error;
};

class DisjointnessViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace corgal

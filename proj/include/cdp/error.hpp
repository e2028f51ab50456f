#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unresolved reference, type mismatch, missing sol binding, overflow.
class EvalError : public Error {
 public:
  using Error::Error;
};

// Ill-formed instance, constraint or dominance specification.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A node, solution or enumeration budget ran out before the search was exhausted.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cdp

#pragma once

#include <stdexcept>
#include <string>

namespace ebsched {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands built over different state spaces.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Ill-formed model: type errors, domain violations, bad references.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Text that does not parse; carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A resource cap was exceeded before the computation could finish.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// Bad command-line request, such as an unknown task name.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace ebsched

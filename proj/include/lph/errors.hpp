#pragma once

#include <stdexcept>
#include <string>

namespace lph {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidBeta : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidStart : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ZeroPolynomial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when no homotopy path reached a usable endpoint.
class AllPathsFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeZeroJacobianRow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lph

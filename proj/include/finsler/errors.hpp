#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

enum class ErrorKind {
  invalid_argument,
  singular_evaluation,
  domain_error,
  degenerate_metric,
  not_a_metric,
  parse_error,
  stiffness_failure,
  invalid_curve,
};

const char* to_string(ErrorKind kind);

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Evaluation left the domain of the metric; `coordinate` names the offending input.
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string coordinate);
  const std::string& coordinate() const { return coordinate_; }

 private:
  std::string coordinate_;
};

/// Expression language error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace finsler

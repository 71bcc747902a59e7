#include "finsler/errors.hpp"

namespace finsler {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::singular_evaluation: return "singular-evaluation";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::degenerate_metric: return "degenerate-metric";
    case ErrorKind::not_a_metric: return "not-a-metric";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::stiffness_failure: return "stiffness-failure";
    case ErrorKind::invalid_curve: return "invalid-curve";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

DomainError::DomainError(const std::string& message, std::string coordinate)
    : Error(ErrorKind::domain_error, message), coordinate_(std::move(coordinate)) {}

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(ErrorKind::parse_error,
            message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace finsler

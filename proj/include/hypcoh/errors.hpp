#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypcoh {

enum class ErrorKind {
  composition_nonzero,
  dimension_mismatch,
  negative_degree,
  not_divisible,
  unsupported_integral,
  unsupported_twist,
  unsupported_pair,
  unsupported_rank,
  unsupported_space,
  bad_range,
  ambiguous_assembly,
  invalid_expression,
  unknown_case,
  parse_error,
  shape_mismatch,
  ambiguous,
  inconsistent,
  out_of_range,
  no_factorization,
  budget_exceeded,
  non_integer_result,
  invalid_field,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::composition_nonzero: return "CompositionNonzero";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::negative_degree: return "NegativeDegree";
    case ErrorKind::not_divisible: return "NotDivisible";
    case ErrorKind::unsupported_integral: return "UnsupportedIntegral";
    case ErrorKind::unsupported_twist: return "UnsupportedTwist";
    case ErrorKind::unsupported_pair: return "UnsupportedPair";
    case ErrorKind::unsupported_rank: return "UnsupportedRank";
    case ErrorKind::unsupported_space: return "UnsupportedSpace";
    case ErrorKind::bad_range: return "BadRange";
    case ErrorKind::ambiguous_assembly: return "AmbiguousAssembly";
    case ErrorKind::invalid_expression: return "InvalidExpression";
    case ErrorKind::unknown_case: return "UnknownCase";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::ambiguous: return "Ambiguous";
    case ErrorKind::inconsistent: return "Inconsistent";
    case ErrorKind::out_of_range: return "OutOfRange";
    case ErrorKind::no_factorization: return "NoFactorization";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::non_integer_result: return "NonIntegerResult";
    case ErrorKind::invalid_field: return "InvalidField";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when more than one outcome is consistent with every constraint.
/// The candidates are human-readable renderings of each surviving outcome.
class AmbiguousError : public Error {
 public:
  AmbiguousError(const std::string& what, std::vector<std::string> candidates)
      : Error(ErrorKind::ambiguous, what + " (" + std::to_string(candidates.size()) + " candidates)"),
        candidates_(std::move(candidates)) {}

  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::string> candidates_;
};

/// Raised by the spec loader; line is 0 when the problem is structural rather than lexical.
class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what, std::size_t line = 0)
      : Error(ErrorKind::parse_error,
              (line ? "line " + std::to_string(line) + ": " : std::string()) +
                  (field.empty() ? std::string() : field + ": ") + what),
        field_(field),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

}  // namespace hypcoh

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cognilog {

enum class ErrorCode {
  duplicate_id,
  dangling_reference,
  causal_cycle,
  invalid_log,
  unknown_participant,
  trivial_time_mismatch,
  sentinel_not_branchable,
  unknown_object,
  empty_class,
  not_in_class,
  not_triangular,
  dimension_mismatch,
  too_large,
  source_target_mismatch,
  missing_timestamp,
  invalid_interval,
  no_admissible_functor,
  ambiguous_inverse_image,
  not_causally_closed,
  no_plan_found,
  parse,
  io,
  invalid_config,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the text readers; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

}  // namespace cognilog

#include "cognilog/error.hpp"

namespace cognilog {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::duplicate_id: return "DuplicateId";
    case ErrorCode::dangling_reference: return "DanglingReference";
    case ErrorCode::causal_cycle: return "CausalCycle";
    case ErrorCode::invalid_log: return "InvalidLog";
    case ErrorCode::unknown_participant: return "UnknownParticipant";
    case ErrorCode::trivial_time_mismatch: return "TrivialTimeMismatch";
    case ErrorCode::sentinel_not_branchable: return "SentinelNotBranchable";
    case ErrorCode::unknown_object: return "UnknownObject";
    case ErrorCode::empty_class: return "EmptyClass";
    case ErrorCode::not_in_class: return "NotInClass";
    case ErrorCode::not_triangular: return "NotTriangular";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::source_target_mismatch: return "SourceTargetMismatch";
    case ErrorCode::missing_timestamp: return "MissingTimestamp";
    case ErrorCode::invalid_interval: return "InvalidInterval";
    case ErrorCode::no_admissible_functor: return "NoAdmissibleFunctor";
    case ErrorCode::ambiguous_inverse_image: return "AmbiguousInverseImage";
    case ErrorCode::not_causally_closed: return "NotCausallyClosed";
    case ErrorCode::no_plan_found: return "NoPlanFound";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::io: return "IoError";
    case ErrorCode::invalid_config: return "InvalidConfig";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::parse,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

}  // namespace cognilog

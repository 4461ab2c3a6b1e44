#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracecat {

enum class ErrorCode {
  reflexive_pair,
  unknown_event,
  duplicate_event,
  invalid_name,
  monoid_mismatch,
  invalid_hom,
  not_parallel,
  not_independence_preserving,
  malformed_relation,
  malformed_diagram,
  not_a_monoid,
  unknown_state,
  invalid_space,
  invalid_system,
  not_a_morphism,
  size_limit,
  parse_error,
  schema_error,
  dangling_reference,
};

// Stable machine-readable spelling, used by the CLI.
constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::reflexive_pair: return "ReflexivePair";
    case ErrorCode::unknown_event: return "UnknownEvent";
    case ErrorCode::duplicate_event: return "DuplicateEvent";
    case ErrorCode::invalid_name: return "InvalidName";
    case ErrorCode::monoid_mismatch: return "MonoidMismatch";
    case ErrorCode::invalid_hom: return "InvalidHom";
    case ErrorCode::not_parallel: return "NotParallel";
    case ErrorCode::not_independence_preserving: return "NotIndependencePreserving";
    case ErrorCode::malformed_relation: return "MalformedRelation";
    case ErrorCode::malformed_diagram: return "MalformedDiagram";
    case ErrorCode::not_a_monoid: return "NotAMonoid";
    case ErrorCode::unknown_state: return "UnknownState";
    case ErrorCode::invalid_space: return "InvalidSpace";
    case ErrorCode::invalid_system: return "InvalidSystem";
    case ErrorCode::not_a_morphism: return "NotAMorphism";
    case ErrorCode::size_limit: return "SizeLimit";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::schema_error: return "SchemaError";
    case ErrorCode::dangling_reference: return "DanglingReference";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tracecat

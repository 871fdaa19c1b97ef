#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evigen/fq_event.hpp"

namespace evigen {

/// Reserved clause prefixes of the requirement templates. `plain` marks an
/// unprefixed clause (usually an fq_event).
enum class ClausePrefix {
  plain,
  prob_target,
  reward_target,
  reward_event,
  reward_value,
  path_formula,
  term,
  constant,
  multi_constant,
  required_event,
};

/// The literal spelling, e.g. `prob_target_`; empty for `plain`.
std::string_view prefix_spelling(ClausePrefix prefix);

/// Exact-match lookup of a prefix spelling (`""` maps to `plain`).
std::optional<ClausePrefix> prefix_from_spelling(std::string_view spelling);

/// Longest reserved prefix that `body` starts with, if any.
std::optional<ClausePrefix> detect_prefix(std::string_view body);

struct Clause {
  ClausePrefix prefix = ClausePrefix::plain;
  std::string body;  // whitespace-normalized, prefix removed

  bool operator==(const Clause&) const = default;
};

enum class BaseTemplate { when, trigger_on_event, every };
std::string_view to_string(BaseTemplate base);

enum class Mode { always, never };
std::string_view to_string(Mode mode);

struct Duration {
  std::uint64_t amount = 0;  // always in rounds
  bool operator==(const Duration&) const = default;
};

struct TraceLinks {
  std::string backwards;  // requirement claim; doubles as the assertion claim id
  std::string forwards;   // verification-method claim supported by the evidence
  bool operator==(const TraceLinks&) const = default;
};

struct StructuredRequirement {
  std::string id;
  BaseTemplate base = BaseTemplate::when;
  std::vector<Clause> guard_conditions;
  std::vector<Clause> until_conditions;
  std::optional<Clause> required_condition;
  std::optional<Clause> trigger_condition;
  std::optional<Duration> duration;
  std::optional<std::string> condition;  // `every`: function(scope[, state])
  std::optional<Mode> always_or_never;
  TraceLinks trace;

  bool operator==(const StructuredRequirement&) const = default;
};

struct ConstantConfig {
  enum class Binding { single, range_set };
  std::string name;
  Binding binding = Binding::single;
  std::string expr;

  bool operator==(const ConstantConfig&) const = default;
};

/// Parses the body of a `constant_` (`name set to expr`) or `multi_constant_`
/// (`name from set expr`) clause. Throws RequirementError{SchemaViolation}.
ConstantConfig parse_constant(const Clause& clause);

/// The `constant_`/`multi_constant_` guard clauses of `r`, in document order.
std::vector<ConstantConfig> constants_of(const StructuredRequirement& r);

/// Function call in an `every` condition, e.g. `reachable(Plan::Plan, MakePlan)`.
struct ConditionCall {
  std::string function;
  std::vector<std::string> args;
};

/// Throws RequirementError{SchemaViolation} when the text is not `name(args)`.
ConditionCall parse_condition(std::string_view condition);

/// Throws RequirementError (XmlSyntax, SchemaViolation, UnknownPrefix).
std::vector<StructuredRequirement> parse_requirements_doc(std::string_view bytes);

/// Canonical XML for a requirement list; parse_requirements_doc inverts it.
std::string write_requirements_doc(std::span<const StructuredRequirement> reqs);

enum class Severity { error, warning, notice };
std::string_view to_string(Severity severity);

struct Diagnostic {
  std::string subject;  // requirement or element id
  Severity severity = Severity::error;
  std::string message;
};

/// Empty iff `r` is well formed and realizable by exactly one requirement template.
std::vector<Diagnostic> validate_requirement(const StructuredRequirement& r);

}  // namespace evigen

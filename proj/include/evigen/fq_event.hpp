#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evigen/error.hpp"

namespace evigen {

enum class RequirementErrorKind { MalformedEvent, XmlSyntax, SchemaViolation, UnknownPrefix };
std::string_view to_string(RequirementErrorKind kind);
using RequirementError = Error<RequirementErrorKind>;

enum class Direction { none, in, out };

struct LiteralPayload {
  std::string value;
  bool operator==(const LiteralPayload&) const = default;
};

struct BinderPayload {
  std::string variable;
  bool operator==(const BinderPayload&) const = default;
};

using Payload = std::variant<std::monostate, LiteralPayload, BinderPayload>;

/// A fully qualified RoboChart event: `module::controller::machine::name[.in|.out][.value|?var]`.
struct FqEvent {
  std::vector<std::string> scope;
  std::string name;
  Direction direction = Direction::none;
  Payload payload;

  bool operator==(const FqEvent&) const = default;
};

bool is_identifier(std::string_view text);

/// Literal values are one or more `.`-separated tokens of `[A-Za-z0-9_+-]`,
/// none of which may be `in` or `out`.
bool is_valid(const FqEvent& event);

/// Throws RequirementError{MalformedEvent}.
FqEvent parse_fq_event(std::string_view text);

std::string render_fq_event(const FqEvent& event);

/// The event with any payload dropped (used for projection/hiding sets).
FqEvent without_payload(FqEvent event);

}  // namespace evigen

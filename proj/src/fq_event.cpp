#include "evigen/fq_event.hpp"

#include <algorithm>

#include "text.hpp"

namespace evigen {

std::string_view to_string(RequirementErrorKind kind) {
  switch (kind) {
    case RequirementErrorKind::MalformedEvent: return "MalformedEvent";
    case RequirementErrorKind::XmlSyntax: return "XmlSyntax";
    case RequirementErrorKind::SchemaViolation: return "SchemaViolation";
    case RequirementErrorKind::UnknownPrefix: return "UnknownPrefix";
  }
  return "RequirementError";
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_literal_char(char c) { return is_ident_char(c) || c == '+' || c == '-'; }

bool is_literal_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_literal_char);
}

bool is_direction_token(std::string_view s) { return s == "in" || s == "out"; }

[[noreturn]] void malformed(std::string_view text, const std::string& why) {
  throw RequirementError(RequirementErrorKind::MalformedEvent, "'" + std::string(text) + "': " + why);
}

}  // namespace

bool is_identifier(std::string_view text) {
  return !text.empty() && is_ident_start(text.front()) &&
         std::all_of(text.begin() + 1, text.end(), is_ident_char);
}

bool is_valid(const FqEvent& event) {
  if (!is_identifier(event.name)) return false;
  if (!std::all_of(event.scope.begin(), event.scope.end(),
                   [](const std::string& s) { return is_identifier(s); })) {
    return false;
  }
  if (const auto* literal = std::get_if<LiteralPayload>(&event.payload)) {
    const auto tokens = text::split(literal->value, ".");
    if (!std::all_of(tokens.begin(), tokens.end(), is_literal_token)) return false;
    if (std::any_of(tokens.begin(), tokens.end(), is_direction_token)) return false;
  }
  if (const auto* binder = std::get_if<BinderPayload>(&event.payload)) {
    if (!is_identifier(binder->variable)) return false;
  }
  return true;
}

FqEvent parse_fq_event(std::string_view input) {
  const auto source = text::trim(input);
  if (source.empty()) malformed(input, "empty event");

  FqEvent event;
  auto segments = text::split(source, "::");
  for (auto& segment : segments) segment = text::trim(segment);
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (segments[i].empty()) malformed(input, "empty scope segment");
    if (!is_identifier(segments[i])) malformed(input, "illegal scope segment '" + std::string(segments[i]) + "'");
    event.scope.emplace_back(segments[i]);
  }

  std::string_view tail = segments.back();
  if (tail.empty()) malformed(input, "missing event name");

  if (const auto q = tail.find('?'); q != std::string_view::npos) {
    const auto variable = text::trim(tail.substr(q + 1));
    if (!is_identifier(variable)) malformed(input, "illegal binder variable");
    event.payload = BinderPayload{std::string(variable)};
    tail = text::trim(tail.substr(0, q));
  }

  auto parts = text::split(tail, ".");
  for (auto& part : parts) part = text::trim(part);
  if (parts.front().empty()) malformed(input, "payload or direction with no event name");
  if (!is_identifier(parts.front())) malformed(input, "illegal event name '" + std::string(parts.front()) + "'");
  event.name = std::string(parts.front());

  std::size_t next = 1;
  if (next < parts.size() && is_direction_token(parts[next])) {
    event.direction = parts[next] == "in" ? Direction::in : Direction::out;
    ++next;
  }
  if (next < parts.size()) {
    if (std::holds_alternative<BinderPayload>(event.payload)) malformed(input, "both literal and binder payload");
    std::vector<std::string> literal;
    for (; next < parts.size(); ++next) {
      if (is_direction_token(parts[next])) malformed(input, "conflicting or repeated direction");
      if (!is_literal_token(parts[next])) malformed(input, "illegal payload value");
      literal.emplace_back(parts[next]);
    }
    event.payload = LiteralPayload{text::join(literal, ".")};
  }
  return event;
}

std::string render_fq_event(const FqEvent& event) {
  std::string out;
  for (const auto& segment : event.scope) {
    out += segment;
    out += "::";
  }
  out += event.name;
  if (event.direction == Direction::in) out += ".in";
  if (event.direction == Direction::out) out += ".out";
  if (const auto* literal = std::get_if<LiteralPayload>(&event.payload)) out += "." + literal->value;
  if (const auto* binder = std::get_if<BinderPayload>(&event.payload)) out += "?" + binder->variable;
  return out;
}

FqEvent without_payload(FqEvent event) {
  event.payload = std::monostate{};
  return event;
}

}  // namespace evigen

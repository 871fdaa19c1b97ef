#include "evigen/requirement.hpp"

#include <array>
#include <sstream>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/detail/rapidxml.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "text.hpp"

namespace evigen {

namespace pt = boost::property_tree;

namespace {

constexpr std::array<std::pair<ClausePrefix, std::string_view>, 10> kPrefixes{{
    {ClausePrefix::plain, ""},
    {ClausePrefix::prob_target, "prob_target_"},
    {ClausePrefix::reward_target, "reward_target_"},
    {ClausePrefix::reward_event, "reward_event_"},
    {ClausePrefix::reward_value, "reward_value_"},
    {ClausePrefix::path_formula, "pathFormula_"},
    {ClausePrefix::term, "term_"},
    {ClausePrefix::constant, "constant_"},
    {ClausePrefix::multi_constant, "multi_constant_"},
    {ClausePrefix::required_event, "required_event_"},
}};

[[noreturn]] void schema(const std::string& where, const std::string& why) {
  throw RequirementError(RequirementErrorKind::SchemaViolation, where + ": " + why);
}

std::optional<std::string> attribute(const pt::ptree& node, const std::string& name) {
  if (const auto attrs = node.get_child_optional("<xmlattr>")) {
    if (const auto value = attrs->get_optional<std::string>(name)) return *value;
  }
  return std::nullopt;
}

bool is_meta(const std::string& key) { return key == "<xmlattr>" || key == "<xmlcomment>"; }

void require_leaf(const pt::ptree& node, const std::string& where) {
  for (const auto& [key, child] : node) {
    if (!is_meta(key)) schema(where, "unexpected nested element <" + key + ">");
  }
}

Clause read_clause(const pt::ptree& node, const std::string& where) {
  require_leaf(node, where);
  Clause clause;
  std::string body = text::collapse_whitespace(node.data());
  if (const auto spelled = attribute(node, "prefix")) {
    const auto prefix = prefix_from_spelling(text::trim(*spelled));
    if (!prefix) {
      throw RequirementError(RequirementErrorKind::UnknownPrefix, where + ": '" + *spelled + "'");
    }
    clause.prefix = *prefix;
  } else if (const auto detected = detect_prefix(body)) {
    clause.prefix = *detected;
    body = text::collapse_whitespace(std::string_view(body).substr(prefix_spelling(*detected).size()));
  }
  if (body.empty()) schema(where, "empty clause body");
  clause.body = std::move(body);
  return clause;
}

bool all_digits(std::string_view s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

Duration read_duration(const pt::ptree& node, const std::string& where) {
  require_leaf(node, where);
  const auto amount = attribute(node, "amount");
  if (!amount) schema(where, "duration without amount");
  const auto digits = text::trim(*amount);
  if (!all_digits(digits) || digits.size() > 18) schema(where, "amount must be a nonnegative integer");
  if (const auto unit = attribute(node, "unit"); unit && text::trim(*unit) != "rounds") {
    schema(where, "unsupported duration unit '" + *unit + "'");
  }
  Duration d;
  for (char c : digits) d.amount = d.amount * 10 + static_cast<std::uint64_t>(c - '0');
  return d;
}

std::optional<BaseTemplate> base_from_string(std::string_view s) {
  const auto t = text::collapse_whitespace(s);
  if (t == "when") return BaseTemplate::when;
  if (t == "trigger_on_event" || t == "trigger on event") return BaseTemplate::trigger_on_event;
  if (t == "every") return BaseTemplate::every;
  return std::nullopt;
}

template <typename T>
void set_once(std::optional<T>& slot, T value, const std::string& where, const char* element) {
  if (slot) schema(where, std::string("duplicate <") + element + ">");
  slot = std::move(value);
}

StructuredRequirement read_requirement(const pt::ptree& node, std::size_t index) {
  StructuredRequirement r;
  r.id = text::collapse_whitespace(attribute(node, "id").value_or(""));
  const std::string where = r.id.empty() ? "requirement #" + std::to_string(index + 1) : "requirement " + r.id;
  if (r.id.empty()) schema(where, "missing id attribute");

  const auto templ = attribute(node, "template");
  if (!templ) schema(where, "missing template attribute");
  const auto base = base_from_string(*templ);
  if (!base) schema(where, "unknown template '" + *templ + "'");
  r.base = *base;

  bool have_trace = false;
  for (const auto& [key, child] : node) {
    if (is_meta(key)) continue;
    const std::string at = where + " <" + key + ">";
    if (key == "trace") {
      if (have_trace) schema(where, "duplicate <trace>");
      require_leaf(child, at);
      r.trace.backwards = text::collapse_whitespace(attribute(child, "backwards").value_or(""));
      r.trace.forwards = text::collapse_whitespace(attribute(child, "forwards").value_or(""));
      have_trace = true;
    } else if (key == "guard") {
      r.guard_conditions.push_back(read_clause(child, at));
    } else if (key == "until") {
      r.until_conditions.push_back(read_clause(child, at));
    } else if (key == "required") {
      set_once(r.required_condition, read_clause(child, at), where, "required");
    } else if (key == "trigger") {
      set_once(r.trigger_condition, read_clause(child, at), where, "trigger");
    } else if (key == "duration") {
      set_once(r.duration, read_duration(child, at), where, "duration");
    } else if (key == "condition") {
      require_leaf(child, at);
      auto condition = text::collapse_whitespace(child.data());
      if (condition.empty()) schema(at, "empty condition");
      set_once(r.condition, std::move(condition), where, "condition");
    } else if (key == "mode") {
      require_leaf(child, at);
      const auto mode = text::to_lower(text::collapse_whitespace(child.data()));
      if (mode != "always" && mode != "never") schema(at, "mode must be always or never");
      set_once(r.always_or_never, mode == "always" ? Mode::always : Mode::never, where, "mode");
    } else {
      schema(where, "unknown element <" + key + ">");
    }
  }

  if (!have_trace) schema(where, "missing <trace>");
  if (r.trace.backwards.empty()) schema(where, "empty backwards trace");

  switch (r.base) {
    case BaseTemplate::when:
      if (!r.required_condition) schema(where, "when-template requires <required>");
      if (r.trigger_condition || r.duration) schema(where, "when-template takes no <trigger>/<duration>");
      if (r.condition || r.always_or_never) schema(where, "when-template takes no <condition>/<mode>");
      break;
    case BaseTemplate::trigger_on_event:
      if (!r.trigger_condition) schema(where, "trigger_on_event requires <trigger>");
      if (!r.duration) schema(where, "trigger_on_event requires <duration>");
      if (!r.required_condition) schema(where, "trigger_on_event requires <required>");
      if (r.condition || r.always_or_never) schema(where, "trigger_on_event takes no <condition>/<mode>");
      break;
    case BaseTemplate::every:
      if (!r.condition) schema(where, "every-template requires <condition>");
      if (!r.always_or_never) schema(where, "every-template requires <mode>");
      if (!r.guard_conditions.empty() || !r.until_conditions.empty() || r.required_condition ||
          r.trigger_condition || r.duration) {
        schema(where, "every-template takes only <condition> and <mode>");
      }
      break;
  }
  return r;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void write_clause(std::ostream& out, std::string_view element, const Clause& clause) {
  out << "    <" << element << " prefix=\"" << prefix_spelling(clause.prefix) << "\">" << xml_escape(clause.body)
      << "</" << element << ">\n";
}

}  // namespace

std::string_view prefix_spelling(ClausePrefix prefix) {
  for (const auto& [p, spelling] : kPrefixes) {
    if (p == prefix) return spelling;
  }
  return "";
}

std::optional<ClausePrefix> prefix_from_spelling(std::string_view spelling) {
  for (const auto& [p, s] : kPrefixes) {
    if (s == spelling) return p;
  }
  return std::nullopt;
}

std::optional<ClausePrefix> detect_prefix(std::string_view body) {
  std::optional<ClausePrefix> best;
  std::size_t best_len = 0;
  for (const auto& [p, spelling] : kPrefixes) {
    if (!spelling.empty() && body.starts_with(spelling) && spelling.size() > best_len) {
      best = p;
      best_len = spelling.size();
    }
  }
  return best;
}

std::string_view to_string(BaseTemplate base) {
  switch (base) {
    case BaseTemplate::when: return "when";
    case BaseTemplate::trigger_on_event: return "trigger_on_event";
    case BaseTemplate::every: return "every";
  }
  return "";
}

std::string_view to_string(Mode mode) { return mode == Mode::always ? "always" : "never"; }

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::notice: return "notice";
  }
  return "";
}

ConstantConfig parse_constant(const Clause& clause) {
  ConstantConfig c;
  std::string_view body = clause.body;
  std::string_view sep;
  if (clause.prefix == ClausePrefix::constant) {
    c.binding = ConstantConfig::Binding::single;
    for (std::string_view candidate : {" set to ", "="}) {
      if (body.find(candidate) != std::string_view::npos) {
        sep = candidate;
        break;
      }
    }
  } else if (clause.prefix == ClausePrefix::multi_constant) {
    c.binding = ConstantConfig::Binding::range_set;
    for (std::string_view candidate : {" from set ", " from "}) {
      if (body.find(candidate) != std::string_view::npos) {
        sep = candidate;
        break;
      }
    }
  } else {
    schema("constant '" + clause.body + "'", "not a constant clause");
  }
  if (sep.empty()) schema("constant '" + clause.body + "'", "expected 'name set to expr' or 'name from set expr'");
  const auto pos = body.find(sep);
  c.name = std::string(text::trim(body.substr(0, pos)));
  c.expr = text::collapse_whitespace(body.substr(pos + sep.size()));
  if (!is_identifier(c.name)) schema("constant '" + clause.body + "'", "illegal constant name");
  if (c.expr.empty()) schema("constant '" + clause.body + "'", "empty constant value");
  return c;
}

std::vector<ConstantConfig> constants_of(const StructuredRequirement& r) {
  std::vector<ConstantConfig> out;
  for (const auto& clause : r.guard_conditions) {
    if (clause.prefix == ClausePrefix::constant || clause.prefix == ClausePrefix::multi_constant) {
      out.push_back(parse_constant(clause));
    }
  }
  return out;
}

ConditionCall parse_condition(std::string_view condition) {
  const auto s = text::trim(condition);
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') {
    schema("condition '" + std::string(s) + "'", "expected function(scope[, state])");
  }
  ConditionCall call;
  call.function = std::string(text::trim(s.substr(0, open)));
  if (!is_identifier(call.function)) schema("condition '" + std::string(s) + "'", "illegal function name");
  const auto inner = s.substr(open + 1, s.size() - open - 2);
  for (auto arg : text::split(inner, ",")) {
    arg = text::trim(arg);
    if (arg.empty()) schema("condition '" + std::string(s) + "'", "empty argument");
    call.args.emplace_back(arg);
  }
  return call;
}

std::vector<StructuredRequirement> parse_requirements_doc(std::string_view bytes) {
  pt::ptree tree;
  try {
    // read_xml does not check that closing tags match; the bundled parser can.
    namespace rx = pt::detail::rapidxml;
    std::vector<char> buffer(bytes.begin(), bytes.end());
    buffer.push_back('\0');
    rx::xml_document<char> check;
    check.parse<rx::parse_validate_closing_tags | rx::parse_non_destructive>(buffer.data());
  } catch (const pt::detail::rapidxml::parse_error& e) {
    throw RequirementError(RequirementErrorKind::XmlSyntax, e.what());
  }
  try {
    std::istringstream in{std::string(bytes)};
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::ptree_error& e) {
    throw RequirementError(RequirementErrorKind::XmlSyntax, e.what());
  }

  const pt::ptree* root = nullptr;
  for (const auto& [key, child] : tree) {
    if (is_meta(key) || key == "<xmldecl>") continue;
    if (key != "requirements" || root != nullptr) schema("document", "expected a single <requirements> root");
    root = &child;
  }
  if (root == nullptr) schema("document", "missing <requirements> root");

  std::vector<StructuredRequirement> reqs;
  for (const auto& [key, child] : *root) {
    if (is_meta(key)) continue;
    if (key != "requirement") schema("document", "unexpected element <" + key + ">");
    reqs.push_back(read_requirement(child, reqs.size()));
  }
  return reqs;
}

std::string write_requirements_doc(std::span<const StructuredRequirement> reqs) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<requirements>\n";
  for (const auto& r : reqs) {
    out << "  <requirement id=\"" << xml_escape(r.id) << "\" template=\"" << to_string(r.base) << "\">\n";
    out << "    <trace backwards=\"" << xml_escape(r.trace.backwards) << "\" forwards=\""
        << xml_escape(r.trace.forwards) << "\"/>\n";
    for (const auto& g : r.guard_conditions) write_clause(out, "guard", g);
    for (const auto& u : r.until_conditions) write_clause(out, "until", u);
    if (r.required_condition) write_clause(out, "required", *r.required_condition);
    if (r.trigger_condition) write_clause(out, "trigger", *r.trigger_condition);
    if (r.duration) out << "    <duration amount=\"" << r.duration->amount << "\" unit=\"rounds\"/>\n";
    if (r.condition) out << "    <condition>" << xml_escape(*r.condition) << "</condition>\n";
    if (r.always_or_never) out << "    <mode>" << to_string(*r.always_or_never) << "</mode>\n";
    out << "  </requirement>\n";
  }
  out << "</requirements>\n";
  return out.str();
}

}  // namespace evigen

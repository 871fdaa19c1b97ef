#include "evigen/assertion.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "evigen/io.hpp"
#include "text.hpp"

namespace evigen {

std::string_view to_string(GenerationErrorKind kind) {
  return kind == GenerationErrorKind::MissingField ? "MissingField" : "MalformedField";
}

std::string_view to_string(Notation notation) {
  switch (notation) {
    case Notation::csp_assertion_dsl: return "csp_assertion_dsl";
    case Notation::prism_assertion_dsl: return "prism_assertion_dsl";
    case Notation::isar: return "isar";
  }
  return "";
}

namespace {

[[noreturn]] void missing(std::string_view claim, const std::string& what) {
  throw GenerationError(GenerationErrorKind::MissingField, "claim " + std::string(claim) + ": " + what);
}

[[noreturn]] void malformed(std::string_view where, const std::string& what) {
  throw GenerationError(GenerationErrorKind::MalformedField, std::string(where) + ": " + what);
}

std::string impl_process(const GenOptions& options) {
  if (options.naming == SemanticsNaming::robo) return options.module_name + "::O__(0)";
  return options.module_name;
}

std::string label_prefix(TimeLabel label) {
  switch (label) {
    case TimeLabel::untimed: return "untimed ";
    case TimeLabel::timed: return "timed ";
    case TimeLabel::both: return "";
  }
  return "";
}

std::string refinement_sections(std::string_view label, std::string_view spec_impl_body, const GenOptions& options,
                                 std::string_view assertion_id) {
  std::string out;
  out += std::string(label) + " csp Spec_impl associated to " + options.module_name + "\n";
  out += "csp-begin\n";
  out += spec_impl_body;
  out += "csp-end\n\n";
  out += std::string(label) + " assertion " + std::string(assertion_id) + " :\n";
  out += "Spec_impl refines Spec in the traces model\n";
  return out;
}

AssertionArtifact make(AtTemplate at, std::string_view claim_id, TimeLabel label, std::string text) {
  AssertionArtifact a;
  a.claim_id = std::string(claim_id);
  a.assertion_id = assertion_id_for(at, claim_id);
  a.template_id = at;
  a.tool = tool_for(at);
  a.notation = a.tool == Tool::FDR      ? Notation::csp_assertion_dsl
               : a.tool == Tool::PRISM  ? Notation::prism_assertion_dsl
                                        : Notation::isar;
  a.time_label = label;
  a.text = std::move(text);
  return a;
}

void check_path_formula(std::string_view claim, std::string_view formula) {
  if (text::trim(formula).empty()) missing(claim, "empty path formula");
  if (!brackets_balanced(formula)) malformed("claim " + std::string(claim), "unbalanced brackets in path formula");
}

std::string prism_tail(std::span<const ConstantConfig> constants) {
  const auto section = render_constants(constants);
  return section.empty() ? std::string() : section;
}

}  // namespace

bool is_claim_id(std::string_view id) {
  if (id.empty() || id.front() == '.' || id.size() > 200) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-' || c == '.';
  });
}

std::string assertion_id_for(AtTemplate at, std::string_view claim_id) {
  const std::string c(claim_id);
  switch (at) {
    case AtTemplate::AtProb: return "P_" + c;
    case AtTemplate::AtRwd: return "R_" + c;
    case AtTemplate::AtTemp: return "T_" + c;
    case AtTemplate::AtDdlk2: return c + "_deadlock_free";
    default: return "A_" + c;
  }
}

Bound parse_bound(std::string_view body) {
  const auto s = text::trim(body);
  static constexpr std::array<std::string_view, 5> kOps{">=", "<=", "==", ">", "<"};
  for (auto op : kOps) {
    if (!s.starts_with(op)) continue;
    auto rest = s.substr(op.size());
    while (!rest.empty() && (rest.front() == '_' || text::is_space(rest.front()))) rest.remove_prefix(1);
    auto expr = text::collapse_whitespace(rest);
    if (expr.empty()) malformed("bound '" + std::string(s) + "'", "missing expression after operator");
    return {std::string(op), std::move(expr)};
  }
  malformed("bound '" + std::string(s) + "'", "expected one of > >= < <= == before the expression");
}

namespace {

bool keyword_at(std::string_view lowered, std::string_view word) {
  if (!lowered.starts_with(word)) return false;
  if (lowered.size() == word.size()) return true;
  const char next = lowered[word.size()];
  return text::is_space(next) || next == '_' || next == '[' || next == '(';
}

std::string_view skip_separators(std::string_view s) {
  while (!s.empty() && (s.front() == '_' || text::is_space(s.front()))) s.remove_prefix(1);
  return s;
}

}  // namespace

TemporalOp parse_term_op(std::string_view body) {
  std::string_view s = text::trim(body);
  const std::string where = "temporal operator '" + std::string(s) + "'";
  TemporalOp op;
  auto lowered = text::to_lower(s);
  if (lowered.starts_with("not")) {
    op.negated = true;
    s = skip_separators(s.substr(3));
    lowered = text::to_lower(s);
  }
  if (keyword_at(lowered, "forall")) {
    op.forall = true;
  } else if (keyword_at(lowered, "exists")) {
    op.forall = false;
  } else {
    malformed(where, "expected [not](forall|exists)");
  }
  auto rest = skip_separators(s.substr(6));
  if (rest.starts_with(prefix_spelling(ClausePrefix::path_formula))) {
    rest = rest.substr(prefix_spelling(ClausePrefix::path_formula).size());
  }
  op.inline_formula = text::collapse_whitespace(rest);
  if (op.inline_formula.size() >= 2 && op.inline_formula.front() == '[' && op.inline_formula.back() == ']') {
    op.inline_formula = text::collapse_whitespace(std::string_view(op.inline_formula).substr(1, op.inline_formula.size() - 2));
  }
  return op;
}

bool brackets_balanced(std::string_view s) {
  std::string stack;
  for (char c : s) {
    switch (c) {
      case '(': stack.push_back(')'); break;
      case '[': stack.push_back(']'); break;
      case '{': stack.push_back('}'); break;
      case ')':
      case ']':
      case '}':
        if (stack.empty() || stack.back() != c) return false;
        stack.pop_back();
        break;
      default: break;
    }
  }
  return stack.empty();
}

std::string render_constants(std::span<const ConstantConfig> constants) {
  if (constants.empty()) return "";
  std::string out = "with constant\n";
  for (std::size_t i = 0; i < constants.size(); ++i) {
    const auto& c = constants[i];
    out += c.name;
    out += c.binding == ConstantConfig::Binding::single ? " set to " : " from set ";
    out += c.expr;
    out += i + 1 < constants.size() ? ",\n" : "\n";
  }
  return out;
}

AssertionArtifact gen_untimed_global(const FqEvent& guard, const FqEvent& required, std::string_view claim_id,
                                     const GenOptions& options) {
  const auto g = render_fq_event(guard);
  const auto r = render_fq_event(required);
  const auto id = assertion_id_for(AtTemplate::AtUtg, claim_id);
  std::string text = "untimed csp Spec\ncsp-begin\n";
  text += "Spec = CHAOS(Events) [|{| " + g + " |}|> (RUN({| " + g + " |}) /\\ " + r + " -> Spec)\n";
  text += "csp-end\n\n";
  text += refinement_sections("untimed", "spec_impl = " + impl_process(options) + "\n", options, id);
  return make(AtTemplate::AtUtg, claim_id, TimeLabel::untimed, std::move(text));
}

AssertionArtifact gen_untimed_local(const FqEvent& scope_guard, const FqEvent& local_guard, const FqEvent& required,
                                    std::string_view claim_id, const GenOptions& options) {
  const auto g1 = render_fq_event(scope_guard);
  const auto g2 = render_fq_event(local_guard);
  const auto r = render_fq_event(required);
  const auto id = assertion_id_for(AtTemplate::AtUtl, claim_id);
  std::string text = "untimed csp Spec\ncsp-begin\n";
  text += "Spec = CHAOS(Events) [|{| " + g1 + " |}|> LocalBehaviour\n";
  text += "LocalBehaviour = CHAOS(Events) [|{| " + g2 + " |}|> (RUN({| " + g2 + " |}) /\\ " + r + " -> Spec)\n";
  text += "csp-end\n\n";
  text += refinement_sections("untimed", "spec_impl = " + impl_process(options) + "\n", options, id);
  return make(AtTemplate::AtUtl, claim_id, TimeLabel::untimed, std::move(text));
}

AssertionArtifact gen_timed_deadline(const FqEvent& trigger, const FqEvent& target, std::uint64_t deadline,
                                     std::string_view claim_id, const GenOptions& options) {
  const auto t = render_fq_event(trigger);
  const auto x = render_fq_event(target);
  const auto id = assertion_id_for(AtTemplate::AtDline, claim_id);
  std::string text = "timed csp Spec\ncsp-begin\nTimed(OneStep) {\n";
  text += "  Spec = timed_priority(CHAOS(Events) [| {| " + t + " |} |> SKIP; ((CHAOS(Events) /\\ (WAIT(" +
          std::to_string(deadline) + "); STOPU)) [| {| " + x + " |} |> SKIP); Spec);\n";
  text += "}\ncsp-end\n\n";
  const std::string impl = "Timed(OneStep) {\n  spec_impl = timed_priority(" + impl_process(options) + " |\\ {| " + t +
                           ", " + x + ", tock |});\n}\n";
  text += refinement_sections("timed", impl, options, id);
  return make(AtTemplate::AtDline, claim_id, TimeLabel::timed, std::move(text));
}

AssertionArtifact gen_general(Kind kind, std::string_view scope, const std::optional<std::string>& state, Mode mode,
                              TimeLabel time_label, std::string_view claim_id) {
  const bool holds = mode == Mode::always;
  const std::string is = holds ? "is" : "is not";
  const std::string sc(scope);
  AtTemplate at = AtTemplate::AtDdlk1;
  std::string body;
  switch (kind) {
    case Kind::Reach: {
      if (!state || state->empty()) missing(claim_id, "reachability assertion needs a state");
      const std::string qualified = state->starts_with(sc + "::") ? *state : sc + "::" + *state;
      at = AtTemplate::AtReach;
      body = qualified + " " + is + " reachable in " + sc;
      break;
    }
    case Kind::DeadlockFdr:
      at = AtTemplate::AtDdlk1;
      body = sc + " " + is + " deadlock-free";
      break;
    case Kind::Divergence:
      at = AtTemplate::AtDiv;
      body = sc + " " + is + " divergence-free";
      break;
    case Kind::Termination:
      at = AtTemplate::AtTerm;
      body = sc + (holds ? " terminates" : " does not terminate");
      break;
    default:
      malformed("claim " + std::string(claim_id), "not a general assertion kind: " + std::string(to_string(kind)));
  }
  auto text = label_prefix(time_label) + "assertion " + assertion_id_for(at, claim_id) + ": " + body + ".\n";
  return make(at, claim_id, time_label, std::move(text));
}

AssertionArtifact gen_ddlk_isar(std::string_view scope, std::string_view claim_id) {
  std::string text = "lemma " + assertion_id_for(AtTemplate::AtDdlk2, claim_id) + ": \"deadlock_free " +
                     std::string(scope) + "\"\n  apply deadlock_free\n";
  return make(AtTemplate::AtDdlk2, claim_id, TimeLabel::both, std::move(text));
}

AssertionArtifact gen_prob(const Bound& target, std::string_view path_formula,
                           std::span<const ConstantConfig> constants, std::string_view claim_id) {
  check_path_formula(claim_id, path_formula);
  std::string text = "prob property " + assertion_id_for(AtTemplate::AtProb, claim_id) + ":\n";
  text += "Prob " + target.op + " " + target.expr + " of [" + std::string(path_formula) + "]\n";
  text += prism_tail(constants);
  return make(AtTemplate::AtProb, claim_id, TimeLabel::both, std::move(text));
}

AssertionArtifact gen_reward(const FqEvent& reward_event, std::string_view reward_value, const Bound& target,
                             std::string_view path_formula, std::span<const ConstantConfig> constants,
                             std::string_view claim_id) {
  if (text::trim(reward_value).empty()) missing(claim_id, "empty reward value");
  check_path_formula(claim_id, path_formula);
  const std::string structure = "reward_" + std::string(claim_id);
  std::string text = "rewards " + structure + "\n";
  text += "  = [" + render_fq_event(reward_event) + "] true : " + std::string(reward_value) + "\n";
  text += "endrewards\n\n";
  text += "prob property " + assertion_id_for(AtTemplate::AtRwd, claim_id) + ":\n";
  text += "Reward " + structure + " " + target.op + " " + target.expr + " of [" + std::string(path_formula) + "]\n";
  text += prism_tail(constants);
  return make(AtTemplate::AtRwd, claim_id, TimeLabel::both, std::move(text));
}

AssertionArtifact gen_temporal(const TemporalOp& op, std::string_view path_formula,
                               std::span<const ConstantConfig> constants, std::string_view claim_id) {
  check_path_formula(claim_id, path_formula);
  std::string text = "prob property " + assertion_id_for(AtTemplate::AtTemp, claim_id) + ":\n";
  text += std::string(op.negated ? "not " : "") + (op.forall ? "Forall" : "Exists") + " [" +
          std::string(path_formula) + "]\n";
  text += prism_tail(constants);
  return make(AtTemplate::AtTemp, claim_id, TimeLabel::both, std::move(text));
}

namespace {

FqEvent event_of(const Clause& clause, std::string_view claim, const char* role) {
  if (clause.prefix != ClausePrefix::plain && clause.prefix != ClausePrefix::required_event) {
    malformed("claim " + std::string(claim), std::string(role) + " clause must be an event, found prefix '" +
                                                 std::string(prefix_spelling(clause.prefix)) + "'");
  }
  return parse_fq_event(clause.body);
}

const Clause* single_prefixed(const std::vector<Clause>& clauses, ClausePrefix prefix, std::string_view claim) {
  const Clause* found = nullptr;
  for (const auto& c : clauses) {
    if (c.prefix != prefix) continue;
    if (found != nullptr) {
      malformed("claim " + std::string(claim), "more than one " + std::string(prefix_spelling(prefix)) + " clause");
    }
    found = &c;
  }
  return found;
}

std::vector<ConstantConfig> constants_checked(const StructuredRequirement& r) {
  try {
    return constants_of(r);
  } catch (const RequirementError& e) {
    malformed("claim " + r.trace.backwards, e.what());
  }
}

std::string path_formula_of(const StructuredRequirement& r, std::string_view claim) {
  const Clause* pf = single_prefixed(r.until_conditions, ClausePrefix::path_formula, claim);
  if (pf == nullptr) missing(claim, "no pathFormula_ clause");
  return pf->body;
}

}  // namespace

AssertionArtifact generate(const StructuredRequirement& r, const GenOptions& options) {
  const std::string& claim = r.trace.backwards;
  if (claim.empty()) missing(r.id, "empty backwards trace");
  if (!is_claim_id(claim)) malformed("requirement " + r.id, "claim id '" + claim + "' is not usable as a file name");
  const auto kind = classify(r);
  const auto target = targets_for(kind).front();

  AssertionArtifact a;
  switch (kind.kind) {
    case Kind::Untimed: {
      std::vector<const Clause*> guards;
      for (const auto& g : r.guard_conditions) {
        if (g.prefix == ClausePrefix::plain) guards.push_back(&g);
      }
      const auto required = event_of(*r.required_condition, claim, "required");
      if (target.template_id == AtTemplate::AtUtl) {
        a = gen_untimed_local(parse_fq_event(guards[0]->body), parse_fq_event(guards[1]->body), required, claim,
                              options);
      } else {
        a = gen_untimed_global(parse_fq_event(guards[0]->body), required, claim, options);
      }
      break;
    }
    case Kind::Timed: {
      if (!r.trigger_condition) missing(claim, "no trigger event");
      if (!r.required_condition) missing(claim, "no target event");
      if (!r.duration) missing(claim, "no deadline");
      a = gen_timed_deadline(event_of(*r.trigger_condition, claim, "trigger"),
                             event_of(*r.required_condition, claim, "required"), r.duration->amount, claim, options);
      break;
    }
    case Kind::Reach:
    case Kind::DeadlockFdr:
    case Kind::Divergence:
    case Kind::Termination:
    case Kind::DeadlockIsa: {
      ConditionCall call;
      try {
        call = parse_condition(r.condition.value_or(""));
      } catch (const RequirementError& e) {
        malformed("claim " + claim, e.what());
      }
      const std::size_t arity = kind.kind == Kind::Reach ? 2 : 1;
      if (call.args.size() < arity) missing(claim, call.function + " needs " + std::to_string(arity) + " argument(s)");
      if (call.args.size() > arity) malformed("claim " + claim, call.function + " takes " + std::to_string(arity) + " argument(s)");
      if (kind.kind == Kind::DeadlockIsa) {
        a = gen_ddlk_isar(call.args[0], claim);
        break;
      }
      if (!r.always_or_never) missing(claim, "no always/never mode");
      std::optional<std::string> state;
      if (arity == 2) state = call.args[1];
      a = gen_general(kind.kind, call.args[0], state, *r.always_or_never, kind.time_label, claim);
      break;
    }
    case Kind::Prob: {
      const auto bound = parse_bound(r.required_condition->body);
      const auto constants = constants_checked(r);
      a = gen_prob(bound, path_formula_of(r, claim), constants, claim);
      break;
    }
    case Kind::Reward: {
      const Clause* ev = single_prefixed(r.guard_conditions, ClausePrefix::reward_event, claim);
      const Clause* value = single_prefixed(r.guard_conditions, ClausePrefix::reward_value, claim);
      if (ev == nullptr) missing(claim, "no reward_event_ clause");
      if (value == nullptr) missing(claim, "no reward_value_ clause");
      const auto bound = parse_bound(r.required_condition->body);
      const auto constants = constants_checked(r);
      a = gen_reward(parse_fq_event(ev->body), value->body, bound, path_formula_of(r, claim), constants, claim);
      break;
    }
    case Kind::Temporal: {
      const auto op = parse_term_op(r.required_condition->body);
      std::string formula = op.inline_formula;
      if (formula.empty()) formula = path_formula_of(r, claim);
      const auto constants = constants_checked(r);
      a = gen_temporal(op, formula, constants, claim);
      break;
    }
  }
  a.source_requirement = r.id;
  return a;
}

std::vector<AssertionArtifact> generate_all(std::span<const StructuredRequirement> reqs, const GenOptions& options) {
  std::vector<AssertionArtifact> out;
  out.reserve(reqs.size());
  for (const auto& r : reqs) out.push_back(generate(r, options));
  return out;
}

std::string assertion_file_name(const AssertionArtifact& a) {
  return a.claim_id + (a.tool == Tool::Isabelle ? ".thy" : ".assertions");
}

std::vector<std::pair<std::string, std::string>> assertion_files(std::span<const AssertionArtifact> artifacts) {
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<Tool> tools;
  std::unordered_map<std::string, std::size_t> index_of;
  for (const auto& a : artifacts) {
    const auto name = assertion_file_name(a);
    const auto [it, fresh] = index_of.try_emplace(name, files.size());
    if (fresh) {
      files.emplace_back(name, a.text);
      tools.push_back(a.tool);
      continue;
    }
    if (tools[it->second] != a.tool) malformed("file " + name, "assertions for different tools share one claim id");
    files[it->second].second += "\n" + a.text;
  }
  return files;
}

std::vector<ManifestEntry> manifest_of(std::span<const AssertionArtifact> artifacts) {
  std::vector<ManifestEntry> out;
  out.reserve(artifacts.size());
  for (const auto& a : artifacts) {
    out.push_back({a.source_requirement, a.claim_id, a.tool, assertion_file_name(a), a.assertion_id, a.template_id,
                   a.time_label});
  }
  return out;
}

nlohmann::json manifest_to_json(std::span<const ManifestEntry> entries) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    list.push_back({{"requirement", e.requirement},
                    {"claim", e.claim},
                    {"tool", to_string(e.tool)},
                    {"file", e.file},
                    {"assertion_id", e.assertion_id},
                    {"template", to_string(e.template_id)},
                    {"time_label", to_string(e.time_label)}});
  }
  return {{"assertions", list}};
}

namespace {

template <typename Enum, std::size_t N>
Enum enum_from(const std::array<Enum, N>& values, const std::string& text, const char* field) {
  for (auto v : values) {
    if (to_string(v) == text) return v;
  }
  malformed("manifest", std::string("unknown ") + field + " '" + text + "'");
}

}  // namespace

std::vector<ManifestEntry> manifest_from_json(const nlohmann::json& doc) {
  static constexpr std::array kTemplates{AtTemplate::AtUtg,  AtTemplate::AtUtl,   AtTemplate::AtDline,
                                         AtTemplate::AtReach, AtTemplate::AtDdlk1, AtTemplate::AtDdlk2,
                                         AtTemplate::AtDiv,  AtTemplate::AtTerm,  AtTemplate::AtProb,
                                         AtTemplate::AtRwd,  AtTemplate::AtTemp};
  static constexpr std::array kLabels{TimeLabel::untimed, TimeLabel::timed, TimeLabel::both};
  static constexpr std::array kTools{Tool::FDR, Tool::PRISM, Tool::Isabelle};
  if (!doc.is_object() || !doc.contains("assertions") || !doc["assertions"].is_array()) {
    malformed("manifest", "expected an object with an 'assertions' array");
  }
  std::vector<ManifestEntry> out;
  for (const auto& item : doc["assertions"]) {
    auto field = [&](const char* key) -> std::string {
      if (!item.is_object() || !item.contains(key) || !item[key].is_string()) {
        malformed("manifest", std::string("entry without string field '") + key + "'");
      }
      return item[key].get<std::string>();
    };
    ManifestEntry e;
    e.requirement = field("requirement");
    e.claim = field("claim");
    e.tool = enum_from(kTools, field("tool"), "tool");
    e.file = field("file");
    e.assertion_id = field("assertion_id");
    e.template_id = enum_from(kTemplates, field("template"), "template");
    e.time_label = enum_from(kLabels, field("time_label"), "time label");
    if (e.claim.empty() || e.file.empty()) malformed("manifest", "empty claim or file");
    if (std::filesystem::path(e.file).has_parent_path() || e.file == "..") {
      malformed("manifest", "file must be a bare name: '" + e.file + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> write_assertions(std::span<const AssertionArtifact> artifacts,
                                            const std::filesystem::path& dir) {
  const auto files = assertion_files(artifacts);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(IoErrorKind::Write, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) write_file_atomic(dir / name, content);
  auto manifest = manifest_of(artifacts);
  write_file_atomic(dir / std::string(kManifestName), manifest_to_json(manifest).dump(2) + "\n");
  return manifest;
}

}  // namespace evigen

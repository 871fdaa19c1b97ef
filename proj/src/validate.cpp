#include <functional>

#include "evigen/assertion.hpp"
#include "evigen/catalog.hpp"
#include "evigen/requirement.hpp"

namespace evigen {

namespace {

class Collector {
 public:
  explicit Collector(std::string subject) : subject_(std::move(subject)) {}

  void error(std::string message) { out_.push_back({subject_, Severity::error, std::move(message)}); }
  void warning(std::string message) { out_.push_back({subject_, Severity::warning, std::move(message)}); }

  /// Runs `check` and records any declared error it throws.
  void attempt(const std::string& what, const std::function<void()>& check) {
    try {
      check();
    } catch (const RequirementError& e) {
      error(what + ": " + e.what());
    } catch (const GenerationError& e) {
      error(what + ": " + e.what());
    }
  }

  std::vector<Diagnostic> take() { return std::move(out_); }

 private:
  std::string subject_;
  std::vector<Diagnostic> out_;
};

bool is_event_prefix(ClausePrefix p) { return p == ClausePrefix::plain || p == ClausePrefix::required_event; }
bool is_constant_prefix(ClausePrefix p) { return p == ClausePrefix::constant || p == ClausePrefix::multi_constant; }

void check_event(Collector& c, const Clause& clause, const std::string& role) {
  if (!is_event_prefix(clause.prefix)) {
    c.error(role + " must be an event, found prefix '" + std::string(prefix_spelling(clause.prefix)) + "'");
    return;
  }
  c.attempt(role, [&] { parse_fq_event(clause.body); });
}

void check_structure(Collector& c, const StructuredRequirement& r) {
  switch (r.base) {
    case BaseTemplate::when:
      if (!r.required_condition) c.error("when-template needs a required clause");
      if (r.trigger_condition || r.duration) c.error("when-template takes no trigger or duration");
      if (r.condition || r.always_or_never) c.error("when-template takes no condition or mode");
      break;
    case BaseTemplate::trigger_on_event:
      if (!r.trigger_condition) c.error("trigger_on_event needs a trigger clause");
      if (!r.duration) c.error("trigger_on_event needs a duration");
      if (!r.required_condition) c.error("trigger_on_event needs a required clause");
      if (r.condition || r.always_or_never) c.error("trigger_on_event takes no condition or mode");
      break;
    case BaseTemplate::every:
      if (!r.condition) c.error("every-template needs a condition");
      if (!r.always_or_never) c.error("every-template needs an always/never mode");
      if (!r.guard_conditions.empty() || !r.until_conditions.empty() || r.required_condition ||
          r.trigger_condition || r.duration) {
        c.error("every-template takes only a condition and a mode");
      }
      break;
  }
}

void check_constants(Collector& c, const StructuredRequirement& r) {
  for (const auto& g : r.guard_conditions) {
    if (is_constant_prefix(g.prefix)) c.attempt("constant '" + g.body + "'", [&] { parse_constant(g); });
  }
}

void check_single(Collector& c, const std::vector<Clause>& clauses, ClausePrefix prefix, const std::string& section,
                  bool required) {
  std::size_t n = 0;
  for (const auto& cl : clauses) n += cl.prefix == prefix ? 1 : 0;
  const auto name = std::string(prefix_spelling(prefix));
  if (n == 0 && required) c.error("missing " + name + " clause in " + section);
  if (n > 1) c.error("more than one " + name + " clause in " + section);
}

void check_path_formulas(Collector& c, const StructuredRequirement& r, bool required) {
  check_single(c, r.until_conditions, ClausePrefix::path_formula, "until section", required);
  for (const auto& u : r.until_conditions) {
    if (u.prefix != ClausePrefix::path_formula) {
      c.error("until clause with prefix '" + std::string(prefix_spelling(u.prefix)) + "' is not a path formula");
    } else if (!brackets_balanced(u.body)) {
      c.error("unbalanced brackets in path formula '" + u.body + "'");
    }
  }
}

void check_prism_guards(Collector& c, const StructuredRequirement& r, bool reward) {
  for (const auto& g : r.guard_conditions) {
    if (is_constant_prefix(g.prefix)) continue;
    if (reward && (g.prefix == ClausePrefix::reward_event || g.prefix == ClausePrefix::reward_value)) continue;
    c.error("guard clause '" + g.body + "' is not a constant" + (reward ? " or reward specification" : ""));
  }
  check_constants(c, r);
}

void check_untimed(Collector& c, const StructuredRequirement& r) {
  for (const auto& g : r.guard_conditions) {
    if (g.prefix == ClausePrefix::plain) {
      check_event(c, g, "guard event");
    } else {
      c.error("guard clause prefix '" + std::string(prefix_spelling(g.prefix)) + "' is not used by RT-UNTIMED");
    }
  }
  if (!r.until_conditions.empty()) c.error("RT-UNTIMED takes no until clauses");
  check_event(c, *r.required_condition, "required event");
}

void check_every(Collector& c, const StructuredRequirement& r, Kind kind) {
  c.attempt("condition", [&] {
    const auto call = parse_condition(*r.condition);
    const std::size_t arity = kind == Kind::Reach ? 2 : 1;
    if (call.args.size() != arity) {
      c.error(call.function + " takes " + std::to_string(arity) + " argument(s), found " +
              std::to_string(call.args.size()));
    }
  });
}

}  // namespace

std::vector<Diagnostic> validate_requirement(const StructuredRequirement& r) {
  const std::string subject = r.id.empty() ? "<unnamed>" : r.id;
  Collector c(subject);
  if (r.id.empty()) c.error("empty requirement id");
  if (r.trace.backwards.empty()) {
    c.error("empty backwards trace");
  } else if (!is_claim_id(r.trace.backwards)) {
    c.error("backwards trace '" + r.trace.backwards + "' is not a usable claim id");
  }
  if (r.trace.forwards.empty()) c.warning("empty forwards trace; evidence cannot be integrated");
  check_structure(c, r);
  auto structural = c.take();
  for (const auto& d : structural) {
    if (d.severity == Severity::error) return structural;
  }
  Collector slots(subject);
  for (auto& d : structural) {
    if (d.severity == Severity::warning) slots.warning(d.message);
  }

  RequirementKind kind;
  try {
    kind = classify(r);
  } catch (const CatalogError& e) {
    slots.error(e.what());
    return slots.take();
  }

  switch (kind.kind) {
    case Kind::Untimed: check_untimed(slots, r); break;
    case Kind::Timed:
      if (!r.guard_conditions.empty() || !r.until_conditions.empty()) {
        slots.error("RT-TIMED takes no guard or until clauses");
      }
      check_event(slots, *r.trigger_condition, "trigger event");
      check_event(slots, *r.required_condition, "target event");
      break;
    case Kind::Reach:
    case Kind::DeadlockFdr:
    case Kind::DeadlockIsa:
    case Kind::Divergence:
    case Kind::Termination: check_every(slots, r, kind.kind); break;
    case Kind::Prob:
      check_prism_guards(slots, r, false);
      check_path_formulas(slots, r, true);
      slots.attempt("prob target", [&] { parse_bound(r.required_condition->body); });
      break;
    case Kind::Reward:
      check_prism_guards(slots, r, true);
      check_single(slots, r.guard_conditions, ClausePrefix::reward_event, "guard section", true);
      check_single(slots, r.guard_conditions, ClausePrefix::reward_value, "guard section", true);
      for (const auto& g : r.guard_conditions) {
        if (g.prefix == ClausePrefix::reward_event) slots.attempt("reward event", [&] { parse_fq_event(g.body); });
      }
      check_path_formulas(slots, r, true);
      slots.attempt("reward target", [&] { parse_bound(r.required_condition->body); });
      break;
    case Kind::Temporal: {
      check_prism_guards(slots, r, false);
      bool inline_formula = false;
      slots.attempt("temporal operator", [&] {
        const auto op = parse_term_op(r.required_condition->body);
        inline_formula = !op.inline_formula.empty();
        if (inline_formula && !brackets_balanced(op.inline_formula)) {
          slots.error("unbalanced brackets in path formula '" + op.inline_formula + "'");
        }
      });
      check_path_formulas(slots, r, !inline_formula);
      if (inline_formula && !r.until_conditions.empty()) slots.error("path formula given twice");
      break;
    }
  }
  return slots.take();
}

}  // namespace evigen

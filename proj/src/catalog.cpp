#include "evigen/catalog.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace evigen {

std::string_view to_string(CatalogErrorKind) { return "Unclassifiable"; }

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::Untimed: return "Untimed";
    case Kind::Timed: return "Timed";
    case Kind::Reach: return "Reach";
    case Kind::DeadlockFdr: return "DeadlockFdr";
    case Kind::DeadlockIsa: return "DeadlockIsa";
    case Kind::Divergence: return "Divergence";
    case Kind::Termination: return "Termination";
    case Kind::Prob: return "Prob";
    case Kind::Reward: return "Reward";
    case Kind::Temporal: return "Temporal";
  }
  return "";
}

std::string_view to_string(Locality locality) { return locality == Locality::global ? "global" : "local"; }

std::string_view to_string(TimeLabel label) {
  switch (label) {
    case TimeLabel::untimed: return "untimed";
    case TimeLabel::timed: return "timed";
    case TimeLabel::both: return "both";
  }
  return "";
}

std::string_view to_string(RtTemplate rt) {
  switch (rt) {
    case RtTemplate::RtUntimed: return "RT-UNTIMED";
    case RtTemplate::RtTimed: return "RT-TIMED";
    case RtTemplate::RtDdlk: return "RT-DDLK";
    case RtTemplate::RtRwd: return "RT-RWD";
    case RtTemplate::RtReach: return "RT-REACH";
    case RtTemplate::RtDiv: return "RT-DIV";
    case RtTemplate::RtTerm: return "RT-TERM";
    case RtTemplate::RtProb: return "RT-PROB";
    case RtTemplate::RtTemp: return "RT-TEMP";
  }
  return "";
}

std::string_view to_string(AtTemplate at) {
  switch (at) {
    case AtTemplate::AtUtg: return "AT-UTG";
    case AtTemplate::AtUtl: return "AT-UTL";
    case AtTemplate::AtDline: return "AT-DLINE";
    case AtTemplate::AtReach: return "AT-REACH";
    case AtTemplate::AtDdlk1: return "AT-DDLK-1";
    case AtTemplate::AtDdlk2: return "AT-DDLK-2";
    case AtTemplate::AtDiv: return "AT-DIV";
    case AtTemplate::AtTerm: return "AT-TERM";
    case AtTemplate::AtProb: return "AT-PROB";
    case AtTemplate::AtRwd: return "AT-RWD";
    case AtTemplate::AtTemp: return "AT-TEMP";
  }
  return "";
}

std::string_view to_string(Tool tool) {
  switch (tool) {
    case Tool::FDR: return "FDR";
    case Tool::PRISM: return "PRISM";
    case Tool::Isabelle: return "Isabelle";
  }
  return "";
}

std::optional<Tool> tool_from_string(std::string_view name) {
  for (Tool t : {Tool::FDR, Tool::PRISM, Tool::Isabelle}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

Tool tool_for(AtTemplate at) {
  switch (at) {
    case AtTemplate::AtProb:
    case AtTemplate::AtRwd:
    case AtTemplate::AtTemp: return Tool::PRISM;
    case AtTemplate::AtDdlk2: return Tool::Isabelle;
    default: return Tool::FDR;
  }
}

RtTemplate requirement_template_of(Kind kind) {
  switch (kind) {
    case Kind::Untimed: return RtTemplate::RtUntimed;
    case Kind::Timed: return RtTemplate::RtTimed;
    case Kind::Reach: return RtTemplate::RtReach;
    case Kind::DeadlockFdr:
    case Kind::DeadlockIsa: return RtTemplate::RtDdlk;
    case Kind::Divergence: return RtTemplate::RtDiv;
    case Kind::Termination: return RtTemplate::RtTerm;
    case Kind::Prob: return RtTemplate::RtProb;
    case Kind::Reward: return RtTemplate::RtRwd;
    case Kind::Temporal: return RtTemplate::RtTemp;
  }
  return RtTemplate::RtUntimed;
}

namespace {

[[noreturn]] void unclassifiable(const StructuredRequirement& r, const std::string& why) {
  throw CatalogError(CatalogErrorKind::Unclassifiable, "requirement " + r.id + ": " + why);
}

RequirementKind classify_when(const StructuredRequirement& r) {
  switch (r.required_condition->prefix) {
    case ClausePrefix::prob_target: return {Kind::Prob};
    case ClausePrefix::reward_target: return {Kind::Reward};
    case ClausePrefix::term: return {Kind::Temporal};
    default: break;
  }
  const auto guards = std::count_if(r.guard_conditions.begin(), r.guard_conditions.end(),
                                    [](const Clause& c) { return c.prefix == ClausePrefix::plain; });
  if (guards == 1) return {Kind::Untimed, Locality::global};
  if (guards == 2) return {Kind::Untimed, Locality::local};
  unclassifiable(r, "untimed requirement needs one (global) or two (local) guard events, found " +
                        std::to_string(guards));
}

RequirementKind classify_every(const StructuredRequirement& r) {
  if (!r.condition) unclassifiable(r, "every-template without condition");
  std::string function;
  try {
    function = parse_condition(*r.condition).function;
  } catch (const RequirementError& e) {
    unclassifiable(r, e.what());
  }
  if (function == "deadlock_free_isa") return {Kind::DeadlockIsa};

  constexpr std::array<std::pair<std::string_view, Kind>, 4> kFamilies{{
      {"reachable", Kind::Reach},
      {"deadlock_free", Kind::DeadlockFdr},
      {"divergence_free", Kind::Divergence},
      {"terminate", Kind::Termination},
  }};
  for (const auto& [stem, kind] : kFamilies) {
    const std::string base(stem);
    if (function == base) return {kind, Locality::global, TimeLabel::both};
    if (function == base + "_untimed") return {kind, Locality::global, TimeLabel::untimed};
    if (function == base + "_timed") return {kind, Locality::global, TimeLabel::timed};
  }
  unclassifiable(r, "unknown function '" + function + "'");
}

constexpr std::array<CatalogRow, 11> kRows{{
    {RtTemplate::RtUntimed, AtTemplate::AtUtg, Tool::FDR},
    {RtTemplate::RtUntimed, AtTemplate::AtUtl, Tool::FDR},
    {RtTemplate::RtTimed, AtTemplate::AtDline, Tool::FDR},
    {RtTemplate::RtReach, AtTemplate::AtReach, Tool::FDR},
    {RtTemplate::RtDdlk, AtTemplate::AtDdlk1, Tool::FDR},
    {RtTemplate::RtDdlk, AtTemplate::AtDdlk2, Tool::Isabelle},
    {RtTemplate::RtDiv, AtTemplate::AtDiv, Tool::FDR},
    {RtTemplate::RtTerm, AtTemplate::AtTerm, Tool::FDR},
    {RtTemplate::RtProb, AtTemplate::AtProb, Tool::PRISM},
    {RtTemplate::RtRwd, AtTemplate::AtRwd, Tool::PRISM},
    {RtTemplate::RtTemp, AtTemplate::AtTemp, Tool::PRISM},
}};

}  // namespace

RequirementKind classify(const StructuredRequirement& r) {
  switch (r.base) {
    case BaseTemplate::when:
      if (!r.required_condition) unclassifiable(r, "when-template without required condition");
      return classify_when(r);
    case BaseTemplate::trigger_on_event: return {Kind::Timed};
    case BaseTemplate::every: return classify_every(r);
  }
  unclassifiable(r, "unknown base template");
}

std::vector<AtTarget> targets_for(const RequirementKind& k) {
  AtTemplate at = AtTemplate::AtUtg;
  switch (k.kind) {
    case Kind::Untimed: at = k.locality == Locality::local ? AtTemplate::AtUtl : AtTemplate::AtUtg; break;
    case Kind::Timed: at = AtTemplate::AtDline; break;
    case Kind::Reach: at = AtTemplate::AtReach; break;
    case Kind::DeadlockFdr: at = AtTemplate::AtDdlk1; break;
    case Kind::DeadlockIsa: at = AtTemplate::AtDdlk2; break;
    case Kind::Divergence: at = AtTemplate::AtDiv; break;
    case Kind::Termination: at = AtTemplate::AtTerm; break;
    case Kind::Prob: at = AtTemplate::AtProb; break;
    case Kind::Reward: at = AtTemplate::AtRwd; break;
    case Kind::Temporal: at = AtTemplate::AtTemp; break;
  }
  return {AtTarget{at, tool_for(at)}};
}

std::span<const CatalogRow> catalog_rows() { return kRows; }

}  // namespace evigen

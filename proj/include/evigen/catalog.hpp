#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "evigen/error.hpp"
#include "evigen/requirement.hpp"

namespace evigen {

enum class CatalogErrorKind { Unclassifiable };
std::string_view to_string(CatalogErrorKind kind);
using CatalogError = Error<CatalogErrorKind>;

enum class Kind { Untimed, Timed, Reach, DeadlockFdr, DeadlockIsa, Divergence, Termination, Prob, Reward, Temporal };
enum class Locality { global, local };
enum class TimeLabel { untimed, timed, both };

std::string_view to_string(Kind kind);
std::string_view to_string(Locality locality);
std::string_view to_string(TimeLabel label);

struct RequirementKind {
  Kind kind = Kind::Untimed;
  Locality locality = Locality::global;  // Untimed only
  TimeLabel time_label = TimeLabel::both;  // general kinds only

  bool operator==(const RequirementKind&) const = default;
};

enum class RtTemplate { RtUntimed, RtTimed, RtDdlk, RtRwd, RtReach, RtDiv, RtTerm, RtProb, RtTemp };
enum class AtTemplate { AtUtg, AtUtl, AtDline, AtReach, AtDdlk1, AtDdlk2, AtDiv, AtTerm, AtProb, AtRwd, AtTemp };
enum class Tool { FDR, PRISM, Isabelle };

std::string_view to_string(RtTemplate rt);
std::string_view to_string(AtTemplate at);
std::string_view to_string(Tool tool);
std::optional<Tool> tool_from_string(std::string_view name);

struct AtTarget {
  AtTemplate template_id;
  Tool tool;
  bool operator==(const AtTarget&) const = default;
};

/// The tool is a function of the assertion template alone.
Tool tool_for(AtTemplate at);

RtTemplate requirement_template_of(Kind kind);

/// Throws CatalogError{Unclassifiable}.
RequirementKind classify(const StructuredRequirement& r);

/// Always exactly one target.
std::vector<AtTarget> targets_for(const RequirementKind& k);

struct CatalogRow {
  RtTemplate requirement_template;
  AtTemplate assertion_template;
  Tool tool;
};

/// RT -> AT -> tool rows for audit, in catalog order.
std::span<const CatalogRow> catalog_rows();

}  // namespace evigen

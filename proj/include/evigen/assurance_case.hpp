#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evigen/catalog.hpp"
#include "evigen/error.hpp"
#include "evigen/requirement.hpp"

namespace evigen {

enum class CaseErrorKind { JsonSyntax, RefIntegrity, DuplicateLink };
std::string_view to_string(CaseErrorKind kind);
using CaseError = Error<CaseErrorKind>;

enum class ClaimKind { goal, strategy, context };
std::string_view to_string(ClaimKind kind);

struct Claim {
  std::string id;
  std::string statement;
  ClaimKind kind = ClaimKind::goal;
  bool operator==(const Claim&) const = default;
};

struct EvidenceArtifact {
  std::string id;
  std::string supported_claim;
  Tool tool = Tool::FDR;
  bool result = false;
  std::string generated_at;  // ISO-8601 UTC
  std::string source_report;
  std::string description;
  bool operator==(const EvidenceArtifact&) const = default;
};

enum class LinkKind { SupportedBy, InContextOf, AssertedEvidence };
std::string_view to_string(LinkKind kind);

/// SupportedBy/InContextOf run parent -> child claim; AssertedEvidence runs
/// evidence (or placeholder) -> claim.
struct Link {
  LinkKind kind = LinkKind::SupportedBy;
  std::string source;
  std::string target;
  bool operator==(const Link&) const = default;
};

struct AssuranceCase {
  std::map<std::string, Claim> claims;
  std::map<std::string, EvidenceArtifact> evidence;
  std::vector<Link> links;
  bool operator==(const AssuranceCase&) const = default;
};

/// Placeholder evidence is a link source with this prefix; it has no entry in
/// the evidence map.
inline constexpr std::string_view kPlaceholderPrefix = "placeholder:";
bool is_placeholder(std::string_view id);

/// Throws CaseError{JsonSyntax, RefIntegrity}.
AssuranceCase load_case(std::string_view bytes);

/// Canonical form: sorted keys, two-space indent, trailing LF.
std::string save_case(const AssuranceCase& ac);

/// Throws CaseError{RefIntegrity} naming the first dangling endpoint.
void check_integrity(const AssuranceCase& ac);

/// The AssertedEvidence link targeting `claim_id`. Throws CaseError{DuplicateLink}.
std::optional<Link> find_link_by_target(const AssuranceCase& ac, std::string_view claim_id);

std::string export_gsn_dot(const AssuranceCase& ac);

std::vector<Diagnostic> validate_structure(const AssuranceCase& ac);

}  // namespace evigen

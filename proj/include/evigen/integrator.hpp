#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evigen/assurance_case.hpp"
#include "evigen/error.hpp"
#include "evigen/report.hpp"
#include "evigen/requirement.hpp"

namespace evigen {

enum class IntegrationErrorKind { TraceMiss, NoLink };
std::string_view to_string(IntegrationErrorKind kind);
using IntegrationError = Error<IntegrationErrorKind>;

struct TraceResolution {
  std::string requirement_id;
  std::string claim_id;  // verification-method claim (forwards trace)
  bool operator==(const TraceResolution&) const = default;
};

/// Matches the report's requirement id against backwards traces.
/// Throws IntegrationError{TraceMiss}, also for an empty or ambiguous forwards trace.
TraceResolution resolve_trace(const VerificationReport& report, std::span<const StructuredRequirement> reqs);

/// resolve_trace over a fixed requirement list, indexed once so that each
/// lookup does not rescan the list.
class TraceIndex {
 public:
  explicit TraceIndex(std::span<const StructuredRequirement> reqs);
  TraceResolution resolve(const VerificationReport& report) const;

 private:
  struct Entry {
    std::string requirement_id;
    std::string forwards;
    std::optional<std::string> conflicting_forwards;
  };
  std::unordered_map<std::string, Entry> by_backwards_;
};

/// Id is `ev:<claim>:<tool>:<12 hex digits of SHA-256(report_bytes)>`.
EvidenceArtifact gen_evidence(bool result, std::string_view ac_claim_id, Tool tool, std::string_view source_report,
                              std::string_view report_bytes, std::string_view generated_at);

/// Copy-on-write: returns the updated case, leaves `ac` untouched. The
/// previous link source is dropped from the evidence map once unreferenced.
/// Throws IntegrationError{NoLink} and CaseError{DuplicateLink}.
AssuranceCase integrate(const AssuranceCase& ac, const EvidenceArtifact& evidence, std::string_view ac_claim_id);

/// Same result as folding integrate() over `items` in order, with one copy of
/// the case and indexed link lookups. Throws as integrate() does.
AssuranceCase integrate_all(const AssuranceCase& ac,
                            std::span<const std::pair<EvidenceArtifact, std::string>> items);

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utc_timestamp_now();

/// True for `YYYY-MM-DDTHH:MM:SSZ`.
bool is_utc_timestamp(std::string_view s);

struct IntegrationSummary {
  std::string requirement;
  std::string claim;
  Tool tool = Tool::FDR;
  bool result = false;
  std::string evidence_id;
};

nlohmann::json summary_to_json(const IntegrationSummary& s);

}  // namespace evigen

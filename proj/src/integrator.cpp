#include "evigen/integrator.hpp"

#include <chrono>
#include <ctime>
#include <unordered_map>

#include "evigen/io.hpp"

namespace evigen {

std::string_view to_string(IntegrationErrorKind kind) {
  return kind == IntegrationErrorKind::TraceMiss ? "TraceMiss" : "NoLink";
}

TraceResolution resolve_trace(const VerificationReport& report, std::span<const StructuredRequirement> reqs) {
  const StructuredRequirement* match = nullptr;
  for (const auto& r : reqs) {
    if (r.trace.backwards != report.requirement_id) continue;
    if (match != nullptr && match->trace.forwards != r.trace.forwards) {
      throw IntegrationError(IntegrationErrorKind::TraceMiss,
                             "claim '" + report.requirement_id + "' traces to both '" + match->trace.forwards +
                                 "' and '" + r.trace.forwards + "'");
    }
    if (match == nullptr) match = &r;
  }
  if (match == nullptr) {
    throw IntegrationError(IntegrationErrorKind::TraceMiss,
                           "no requirement has backwards trace '" + report.requirement_id + "'");
  }
  if (match->trace.forwards.empty()) {
    throw IntegrationError(IntegrationErrorKind::TraceMiss, "requirement " + match->id + " has no forwards trace");
  }
  return {match->id, match->trace.forwards};
}

TraceIndex::TraceIndex(std::span<const StructuredRequirement> reqs) {
  for (const auto& r : reqs) {
    auto [it, fresh] = by_backwards_.try_emplace(r.trace.backwards, Entry{r.id, r.trace.forwards, std::nullopt});
    if (!fresh && !it->second.conflicting_forwards && it->second.forwards != r.trace.forwards) {
      it->second.conflicting_forwards = r.trace.forwards;
    }
  }
}

TraceResolution TraceIndex::resolve(const VerificationReport& report) const {
  const auto it = by_backwards_.find(report.requirement_id);
  if (it == by_backwards_.end()) {
    throw IntegrationError(IntegrationErrorKind::TraceMiss,
                           "no requirement has backwards trace '" + report.requirement_id + "'");
  }
  const auto& e = it->second;
  if (e.conflicting_forwards) {
    throw IntegrationError(IntegrationErrorKind::TraceMiss, "claim '" + report.requirement_id + "' traces to both '" +
                                                                e.forwards + "' and '" + *e.conflicting_forwards + "'");
  }
  if (e.forwards.empty()) {
    throw IntegrationError(IntegrationErrorKind::TraceMiss, "requirement " + e.requirement_id + " has no forwards trace");
  }
  return {e.requirement_id, e.forwards};
}

namespace {

std::string_view method_of(Tool tool) {
  switch (tool) {
    case Tool::FDR: return "refinement model checking";
    case Tool::PRISM: return "probabilistic model checking";
    case Tool::Isabelle: return "theorem proving";
  }
  return "";
}

}  // namespace

EvidenceArtifact gen_evidence(bool result, std::string_view ac_claim_id, Tool tool, std::string_view source_report,
                              std::string_view report_bytes, std::string_view generated_at) {
  EvidenceArtifact e;
  e.id = "ev:" + std::string(ac_claim_id) + ":" + std::string(to_string(tool)) + ":" +
         sha256_hex(report_bytes).substr(0, 12);
  e.supported_claim = std::string(ac_claim_id);
  e.tool = tool;
  e.result = result;
  e.generated_at = std::string(generated_at);
  e.source_report = std::string(source_report);
  e.description = std::string(to_string(tool)) + " " + std::string(method_of(tool)) + " (report " +
                  std::string(source_report) + "): " + (result ? "claim is satisfied" : "claim is not satisfied");
  return e;
}

AssuranceCase integrate(const AssuranceCase& ac, const EvidenceArtifact& evidence, std::string_view ac_claim_id) {
  const auto link = find_link_by_target(ac, ac_claim_id);
  if (!link) {
    throw IntegrationError(IntegrationErrorKind::NoLink,
                           "no AssertedEvidence link targets claim '" + std::string(ac_claim_id) + "'");
  }
  AssuranceCase next = ac;
  if (link->source == evidence.id) return next;

  const std::string old = link->source;
  for (auto& l : next.links) {
    if (l.kind == LinkKind::AssertedEvidence && l.target == ac_claim_id) l.source = evidence.id;
  }
  next.evidence[evidence.id] = evidence;
  bool still_used = false;
  for (const auto& l : next.links) still_used = still_used || l.source == old;
  if (!still_used) next.evidence.erase(old);
  return next;
}

AssuranceCase integrate_all(const AssuranceCase& ac,
                            std::span<const std::pair<EvidenceArtifact, std::string>> items) {
  AssuranceCase next = ac;
  // Evidence links by target claim, and how many links use each source.
  std::unordered_map<std::string, std::vector<std::size_t>> by_target;
  std::unordered_map<std::string, std::size_t> uses;
  for (std::size_t i = 0; i < next.links.size(); ++i) {
    const auto& l = next.links[i];
    if (l.kind == LinkKind::AssertedEvidence) by_target[l.target].push_back(i);
    ++uses[l.source];
  }
  for (const auto& [evidence, claim] : items) {
    const auto it = by_target.find(claim);
    if (it == by_target.end()) {
      throw IntegrationError(IntegrationErrorKind::NoLink, "no AssertedEvidence link targets claim '" + claim + "'");
    }
    if (it->second.size() > 1) throw CaseError(CaseErrorKind::DuplicateLink, "claim '" + claim + "' has two evidence links");
    auto& link = next.links[it->second.front()];
    if (link.source == evidence.id) continue;
    const std::string old = link.source;
    link.source = evidence.id;
    ++uses[evidence.id];
    next.evidence[evidence.id] = evidence;
    if (--uses[old] == 0) next.evidence.erase(old);
  }
  return next;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_utc_timestamp(std::string_view s) {
  constexpr std::string_view kShape = "dddd-dd-ddTdd:dd:ddZ";
  if (s.size() != kShape.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (kShape[i] == 'd' ? (s[i] < '0' || s[i] > '9') : s[i] != kShape[i]) return false;
  }
  return true;
}

nlohmann::json summary_to_json(const IntegrationSummary& s) {
  return {{"req", s.requirement},
          {"claim", s.claim},
          {"tool", to_string(s.tool)},
          {"result", s.result},
          {"evidence_id", s.evidence_id}};
}

}  // namespace evigen

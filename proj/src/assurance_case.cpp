#include "evigen/assurance_case.hpp"

#include <set>

#include <nlohmann/json.hpp>

namespace evigen {

using nlohmann::json;

std::string_view to_string(CaseErrorKind kind) {
  switch (kind) {
    case CaseErrorKind::JsonSyntax: return "JsonSyntax";
    case CaseErrorKind::RefIntegrity: return "RefIntegrity";
    case CaseErrorKind::DuplicateLink: return "DuplicateLink";
  }
  return "";
}

std::string_view to_string(ClaimKind kind) {
  switch (kind) {
    case ClaimKind::goal: return "goal";
    case ClaimKind::strategy: return "strategy";
    case ClaimKind::context: return "context";
  }
  return "";
}

std::string_view to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::SupportedBy: return "SupportedBy";
    case LinkKind::InContextOf: return "InContextOf";
    case LinkKind::AssertedEvidence: return "AssertedEvidence";
  }
  return "";
}

bool is_placeholder(std::string_view id) { return id.starts_with(kPlaceholderPrefix); }

namespace {

[[noreturn]] void syntax(const std::string& why) { throw CaseError(CaseErrorKind::JsonSyntax, why); }

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) syntax(where + ": missing '" + key + "'");
  return obj.at(key);
}

std::string string_member(const json& obj, const char* key, const std::string& where) {
  const auto& v = member(obj, key, where);
  if (!v.is_string()) syntax(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

ClaimKind claim_kind_from(const std::string& s, const std::string& where) {
  for (auto k : {ClaimKind::goal, ClaimKind::strategy, ClaimKind::context}) {
    if (to_string(k) == s) return k;
  }
  syntax(where + ": unknown claim kind '" + s + "'");
}

LinkKind link_kind_from(const std::string& s, const std::string& where) {
  for (auto k : {LinkKind::SupportedBy, LinkKind::InContextOf, LinkKind::AssertedEvidence}) {
    if (to_string(k) == s) return k;
  }
  syntax(where + ": unknown link kind '" + s + "'");
}

[[noreturn]] void dangling(const std::string& why) { throw CaseError(CaseErrorKind::RefIntegrity, why); }

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  // A backslash right before the closing quote would escape it.
  if (out.back() == '\\') out.push_back(' ');
  return out + "\"";
}

}  // namespace

void check_integrity(const AssuranceCase& ac) {
  for (const auto& [id, c] : ac.claims) {
    if (id.empty() || c.id != id) dangling("claim key '" + id + "' does not match its id");
    if (is_placeholder(id)) dangling("claim id '" + id + "' uses the placeholder prefix");
  }
  for (const auto& [id, e] : ac.evidence) {
    if (id.empty() || e.id != id) dangling("evidence key '" + id + "' does not match its id");
    if (ac.claims.contains(id)) dangling("id '" + id + "' is both a claim and evidence");
    if (is_placeholder(id)) dangling("evidence id '" + id + "' uses the placeholder prefix");
    if (!ac.claims.contains(e.supported_claim)) {
      dangling("evidence '" + id + "' supports missing claim '" + e.supported_claim + "'");
    }
  }
  for (const auto& l : ac.links) {
    const auto what = std::string(to_string(l.kind)) + " link " + l.source + " -> " + l.target;
    if (!ac.claims.contains(l.target)) dangling(what + ": missing target claim");
    if (l.kind == LinkKind::AssertedEvidence) {
      if (!is_placeholder(l.source) && !ac.evidence.contains(l.source)) dangling(what + ": missing evidence");
      if (is_placeholder(l.source) && l.source.size() == kPlaceholderPrefix.size()) dangling(what + ": empty placeholder");
    } else if (!ac.claims.contains(l.source)) {
      dangling(what + ": missing source claim");
    }
  }
}

AssuranceCase load_case(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    syntax(e.what());
  }
  if (!doc.is_object()) syntax("top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "claims" && key != "evidence" && key != "links") syntax("unknown top-level key '" + key + "'");
  }
  AssuranceCase ac;
  const auto& claims = member(doc, "claims", "document");
  const auto& evidence = member(doc, "evidence", "document");
  const auto& links = member(doc, "links", "document");
  if (!claims.is_object() || !evidence.is_object() || !links.is_array()) {
    syntax("claims and evidence must be objects, links an array");
  }
  for (const auto& [id, c] : claims.items()) {
    const auto where = "claim '" + id + "'";
    Claim claim{id, string_member(c, "statement", where), claim_kind_from(string_member(c, "kind", where), where)};
    ac.claims.emplace(id, std::move(claim));
  }
  for (const auto& [id, e] : evidence.items()) {
    const auto where = "evidence '" + id + "'";
    EvidenceArtifact art;
    art.id = id;
    art.supported_claim = string_member(e, "supported_claim", where);
    const auto tool = tool_from_string(string_member(e, "tool", where));
    if (!tool) syntax(where + ": unknown tool");
    art.tool = *tool;
    const auto& result = member(e, "result", where);
    if (!result.is_boolean()) syntax(where + ": 'result' must be a boolean");
    art.result = result.get<bool>();
    art.generated_at = string_member(e, "generated_at", where);
    art.source_report = string_member(e, "source_report", where);
    art.description = string_member(e, "description", where);
    ac.evidence.emplace(id, std::move(art));
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto where = "link #" + std::to_string(i + 1);
    const auto& l = links[i];
    ac.links.push_back({link_kind_from(string_member(l, "kind", where), where), string_member(l, "source", where),
                        string_member(l, "target", where)});
  }
  check_integrity(ac);
  return ac;
}

std::string save_case(const AssuranceCase& ac) {
  json claims = json::object();
  for (const auto& [id, c] : ac.claims) claims[id] = {{"kind", to_string(c.kind)}, {"statement", c.statement}};
  json evidence = json::object();
  for (const auto& [id, e] : ac.evidence) {
    evidence[id] = {{"supported_claim", e.supported_claim}, {"tool", to_string(e.tool)},
                    {"result", e.result},                   {"generated_at", e.generated_at},
                    {"source_report", e.source_report},     {"description", e.description}};
  }
  json links = json::array();
  for (const auto& l : ac.links) links.push_back({{"kind", to_string(l.kind)}, {"source", l.source}, {"target", l.target}});
  json doc = {{"claims", claims}, {"evidence", evidence}, {"links", links}};
  return doc.dump(2) + "\n";
}

std::optional<Link> find_link_by_target(const AssuranceCase& ac, std::string_view claim_id) {
  std::optional<Link> found;
  for (const auto& l : ac.links) {
    if (l.kind != LinkKind::AssertedEvidence || l.target != claim_id) continue;
    if (found) throw CaseError(CaseErrorKind::DuplicateLink, "claim '" + std::string(claim_id) + "' has two evidence links");
    found = l;
  }
  return found;
}

std::string export_gsn_dot(const AssuranceCase& ac) {
  std::string out = "digraph assurance_case {\n";
  out += "  rankdir=TB;\n";
  out += "  node [fontname=\"Helvetica\"];\n";
  for (const auto& [id, c] : ac.claims) {
    std::string attrs;
    switch (c.kind) {
      case ClaimKind::goal: attrs = "shape=box"; break;
      case ClaimKind::strategy: attrs = "shape=parallelogram"; break;
      case ClaimKind::context: attrs = "shape=box, style=rounded"; break;
    }
    const auto label = c.statement.empty() ? id : id + "\n" + c.statement;
    out += "  " + dot_quote(id) + " [" + attrs + ", label=" + dot_quote(label) + "];\n";
  }
  std::set<std::string> placeholders;
  for (const auto& l : ac.links) {
    if (l.kind == LinkKind::AssertedEvidence && is_placeholder(l.source)) placeholders.insert(l.source);
  }
  std::set<std::string> solutions(placeholders);
  for (const auto& [id, e] : ac.evidence) solutions.insert(id);
  for (const auto& id : solutions) {
    if (placeholders.contains(id) && !ac.evidence.contains(id)) {
      out += "  " + dot_quote(id) + " [shape=circle, style=dashed, label=" +
             dot_quote(id.substr(kPlaceholderPrefix.size())) + "];\n";
      continue;
    }
    const auto& e = ac.evidence.at(id);
    const auto label = id + "\n" + std::string(to_string(e.tool)) + "\nresult: " + (e.result ? "true" : "false");
    out += "  " + dot_quote(id) + " [shape=circle, label=" + dot_quote(label) + "];\n";
  }
  for (const auto& l : ac.links) {
    switch (l.kind) {
      case LinkKind::SupportedBy: out += "  " + dot_quote(l.source) + " -> " + dot_quote(l.target) + ";\n"; break;
      case LinkKind::InContextOf:
        out += "  " + dot_quote(l.source) + " -> " + dot_quote(l.target) + " [label=\"InContextOf\", arrowhead=empty];\n";
        break;
      case LinkKind::AssertedEvidence: out += "  " + dot_quote(l.target) + " -> " + dot_quote(l.source) + ";\n"; break;
    }
  }
  out += "}\n";
  return out;
}

std::vector<Diagnostic> validate_structure(const AssuranceCase& ac) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string subject, Severity severity, std::string message) {
    out.push_back({std::move(subject), severity, std::move(message)});
  };
  std::set<std::string> referenced;
  std::map<std::string, int> evidence_links;
  std::set<std::string> has_children;
  for (const auto& l : ac.links) {
    const auto what = std::string(to_string(l.kind)) + " link " + l.source + " -> " + l.target;
    if (!ac.claims.contains(l.target)) report(l.target, Severity::error, what + " has a missing target");
    if (l.kind == LinkKind::AssertedEvidence) {
      ++evidence_links[l.target];
      referenced.insert(l.source);
      if (is_placeholder(l.source)) {
        report(l.target, Severity::notice, "placeholder evidence " + l.source);
      } else if (!ac.evidence.contains(l.source)) {
        report(l.target, Severity::error, what + " has missing evidence");
      } else if (ac.evidence.at(l.source).supported_claim != l.target) {
        report(l.source, Severity::warning, "evidence supports '" + ac.evidence.at(l.source).supported_claim +
                                                "' but is linked to '" + l.target + "'");
      }
    } else {
      if (!ac.claims.contains(l.source)) report(l.source, Severity::error, what + " has a missing source");
      if (l.kind == LinkKind::SupportedBy) has_children.insert(l.source);
    }
  }
  for (const auto& [claim, n] : evidence_links) {
    if (n > 1) report(claim, Severity::error, "claim has " + std::to_string(n) + " evidence links");
  }
  for (const auto& [id, c] : ac.claims) {
    if (c.kind == ClaimKind::goal && !has_children.contains(id) && !evidence_links.contains(id)) {
      report(id, Severity::warning, "leaf goal has no evidence link");
    }
  }
  for (const auto& [id, e] : ac.evidence) {
    if (!referenced.contains(id)) report(id, Severity::warning, "evidence is not linked to any claim");
    if (!ac.claims.contains(e.supported_claim)) {
      report(id, Severity::error, "evidence supports missing claim '" + e.supported_claim + "'");
    }
  }
  return out;
}

}  // namespace evigen

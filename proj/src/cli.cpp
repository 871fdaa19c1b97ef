#include "evigen/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evigen/assertion.hpp"
#include "evigen/assurance_case.hpp"
#include "evigen/catalog.hpp"
#include "evigen/config.hpp"
#include "evigen/integrator.hpp"
#include "evigen/io.hpp"
#include "evigen/report.hpp"
#include "evigen/requirement.hpp"
#include "evigen/verifier.hpp"

namespace evigen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  bool verbose = false;
  bool json = false;
  std::optional<fs::path> config;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
  const Globals& g;
};

std::vector<StructuredRequirement> load_requirements(const fs::path& path) {
  return parse_requirements_doc(read_file(path));
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  const auto bytes = read_file(path);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw GenerationError(GenerationErrorKind::MalformedField, "manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(doc);
}

bool needs_module(AtTemplate at) {
  return at == AtTemplate::AtUtg || at == AtTemplate::AtUtl || at == AtTemplate::AtDline;
}

void print_diagnostic(std::ostream& err, const Diagnostic& d) {
  err << to_string(d.severity) << ": " << d.subject << ": " << d.message << "\n";
}

// generate ------------------------------------------------------------------

struct GenerateArgs {
  fs::path reqs;
  std::string module;
  fs::path out;
  std::string naming;
};

int cmd_generate(const GenerateArgs& a, const Io& io) {
  const auto reqs = load_requirements(a.reqs);
  GenOptions options{a.module, SemanticsNaming::plain};
  if (!a.naming.empty()) {
    options.naming = a.naming == "robo" ? SemanticsNaming::robo : SemanticsNaming::plain;
  } else if (const auto config = load_config(io.g.config); config.semantics_naming) {
    options.naming = *config.semantics_naming;
  }

  bool failed = false;
  std::vector<AssertionArtifact> artifacts;
  for (const auto& r : reqs) {
    const auto diagnostics = validate_requirement(r);
    for (const auto& d : diagnostics) {
      if (d.severity == Severity::error || io.g.verbose) print_diagnostic(io.err, d);
    }
    if (std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.severity == Severity::error; })) {
      failed = true;
      continue;
    }
    try {
      auto artifact = generate(r, options);
      if (needs_module(artifact.template_id) && options.module_name.empty()) {
        io.err << "error: " << r.id << ": " << to_string(artifact.template_id) << " needs --module\n";
        failed = true;
        continue;
      }
      artifacts.push_back(std::move(artifact));
    } catch (const std::runtime_error& e) {
      io.err << "error: " << r.id << ": " << e.what() << "\n";
      failed = true;
    }
  }
  if (failed) return kExitInput;

  const auto entries = write_assertions(artifacts, a.out);
  if (io.g.json) {
    io.out << manifest_to_json(entries).dump() << "\n";
  } else {
    for (const auto& e : entries) {
      io.out << e.requirement << "  " << e.claim << "  " << to_string(e.template_id) << "  " << to_string(e.tool)
             << "  " << e.file << "\n";
    }
    io.out << entries.size() << " assertion(s) written to " << a.out.string() << "\n";
  }
  return kExitOk;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  fs::path manifest;
  std::string backend = "stub";
  std::optional<fs::path> stub_results;
  fs::path out;
};

int cmd_verify(const VerifyArgs& a, const Io& io) {
  const auto entries = load_manifest(a.manifest);
  const auto dir = a.manifest.parent_path().empty() ? fs::path(".") : a.manifest.parent_path();

  std::vector<ReportFile> reports;
  if (a.backend == "stub") {
    StubResults results;
    if (a.stub_results) {
      const auto bytes = read_file(*a.stub_results);
      json doc;
      try {
        doc = json::parse(bytes);
      } catch (const json::exception& e) {
        throw BackendError(BackendErrorKind::StubResults, a.stub_results->string() + ": " + e.what());
      }
      results = StubResults::from_json(doc);
    }
    reports = run_stub(entries, dir, results);
  } else {
    reports = run_exec(entries, dir, load_config(io.g.config));
  }

  fs::create_directories(a.out);
  for (const auto& r : reports) write_file_atomic(a.out / r.name, r.bytes);

  int status = kExitOk;
  json summary = json::array();
  for (const auto& r : reports) {
    try {
      const auto parsed = parse_report(r.bytes);
      const bool result = aggregate(parsed);
      if (!result) status = std::max(status, static_cast<int>(kExitFalse));
      summary.push_back({{"report", r.name}, {"claim", parsed.requirement_id}, {"tool", to_string(parsed.tool)}, {"result", result}});
      if (!io.g.json) io.out << r.name << "  " << parsed.requirement_id << "  " << (result ? "true" : "false") << "\n";
    } catch (const ReportError& e) {
      io.err << "error: " << r.name << ": " << e.what() << "\n";
      status = kExitInput;
    }
  }
  if (io.g.json) io.out << summary.dump() << "\n";
  return status;
}

// integrate -----------------------------------------------------------------

struct IntegrateArgs {
  fs::path reports;
  fs::path reqs;
  fs::path ac;
  std::string timestamp;
};

std::vector<fs::path> report_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError(IoErrorKind::Read, dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".html" || ext == ".log")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_integrate(const IntegrateArgs& a, const Io& io) {
  const auto timestamp = a.timestamp.empty() ? utc_timestamp_now() : a.timestamp;
  if (!is_utc_timestamp(timestamp)) {
    io.err << "error: --timestamp must look like 2024-01-31T12:00:00Z\n";
    return kExitInput;
  }
  const auto reqs = load_requirements(a.reqs);
  const auto original = read_file(a.ac);
  auto ac = load_case(original);

  // Everything is gathered in memory; the case file is written once at the end.
  const TraceIndex index(reqs);
  std::vector<IntegrationSummary> summaries;
  std::vector<std::pair<EvidenceArtifact, std::string>> items;
  for (const auto& path : report_files(a.reports)) {
    const auto bytes = read_file(path);
    const auto report = parse_report(bytes);
    const bool result = aggregate(report);
    const auto trace = index.resolve(report);
    auto evidence = gen_evidence(result, trace.claim_id, report.tool, path.generic_string(), bytes, timestamp);
    summaries.push_back({trace.requirement_id, trace.claim_id, report.tool, result, evidence.id});
    items.emplace_back(std::move(evidence), trace.claim_id);
    if (io.g.verbose) io.err << "integrated " << path.string() << " -> " << trace.claim_id << "\n";
  }
  ac = integrate_all(ac, items);
  check_integrity(ac);
  const auto saved = save_case(ac);
  if (saved != original) write_file_atomic(a.ac, saved);

  bool all_true = true;
  for (const auto& s : summaries) {
    io.out << summary_to_json(s).dump() << "\n";
    all_true = all_true && s.result;
  }
  return all_true ? kExitOk : kExitFalse;
}

// render --------------------------------------------------------------------

int cmd_render(const fs::path& ac_path, const std::optional<fs::path>& out, const Io& io) {
  const auto ac = load_case(read_file(ac_path));
  if (io.g.verbose) {
    for (const auto& d : validate_structure(ac)) print_diagnostic(io.err, d);
  }
  const auto dot = export_gsn_dot(ac);
  if (out) {
    write_file_atomic(*out, dot);
  } else {
    io.out << dot;
  }
  return kExitOk;
}

// trace ---------------------------------------------------------------------

struct TraceRow {
  std::string requirement;
  std::string claim;
  std::string ac_claim;
  std::vector<std::string> assertions;
  std::string evidence;
  std::optional<bool> result;
  std::string problem;  // empty when the chain is complete
};

TraceRow trace_row(const StructuredRequirement& r, const AssuranceCase& ac, std::span<const ManifestEntry> manifest) {
  TraceRow row{r.id, r.trace.backwards, r.trace.forwards, {}, {}, std::nullopt, {}};
  for (const auto& e : manifest) {
    if (e.requirement == r.id) row.assertions.push_back(e.assertion_id);
  }
  auto broken = [&](std::string why) {
    if (row.problem.empty()) row.problem = std::move(why);
  };
  if (row.assertions.empty()) broken("no assertion in manifest");
  if (row.ac_claim.empty()) {
    broken("no forwards trace");
    return row;
  }
  if (!ac.claims.contains(row.ac_claim)) {
    broken("claim not in assurance case");
    return row;
  }
  std::optional<Link> link;
  try {
    link = find_link_by_target(ac, row.ac_claim);
  } catch (const CaseError&) {
    broken("several evidence links");
    return row;
  }
  if (!link) {
    broken("no evidence link");
    return row;
  }
  row.evidence = link->source;
  if (is_placeholder(link->source)) {
    broken("placeholder evidence");
  } else if (const auto it = ac.evidence.find(link->source); it == ac.evidence.end()) {
    broken("evidence missing");
  } else {
    row.result = it->second.result;
    if (it->second.supported_claim != row.ac_claim) broken("evidence supports another claim");
  }
  return row;
}

int cmd_trace(const fs::path& ac_path, const fs::path& reqs_path, const fs::path& manifest_path, const Io& io) {
  const auto ac = load_case(read_file(ac_path));
  const auto reqs = load_requirements(reqs_path);
  const auto manifest = load_manifest(manifest_path);

  std::vector<TraceRow> rows;
  for (const auto& r : reqs) rows.push_back(trace_row(r, ac, manifest));
  const bool complete = std::all_of(rows.begin(), rows.end(), [](const TraceRow& r) { return r.problem.empty(); });

  if (io.g.json) {
    json doc = json::array();
    for (const auto& r : rows) {
      doc.push_back({{"requirement", r.requirement},
                     {"claim", r.claim},
                     {"ac_claim", r.ac_claim},
                     {"assertions", r.assertions},
                     {"evidence", r.evidence},
                     {"result", r.result ? json(*r.result) : json(nullptr)},
                     {"complete", r.problem.empty()},
                     {"problem", r.problem}});
    }
    io.out << doc.dump() << "\n";
  } else {
    io.out << "requirement | claim | ac_claim | assertion | evidence | result | status\n";
    for (const auto& r : rows) {
      std::string assertions;
      for (const auto& a : r.assertions) assertions += (assertions.empty() ? "" : ",") + a;
      io.out << r.requirement << " | " << r.claim << " | " << r.ac_claim << " | " << (assertions.empty() ? "-" : assertions)
             << " | " << (r.evidence.empty() ? "-" : r.evidence) << " | "
             << (r.result ? (*r.result ? "true" : "false") : "-") << " | "
             << (r.problem.empty() ? "complete" : "incomplete: " + r.problem) << "\n";
    }
  }
  return complete ? kExitOk : kExitFalse;
}

// catalog / parse-report ----------------------------------------------------

int cmd_catalog(const Io& io) {
  if (io.g.json) {
    json doc = json::array();
    for (const auto& row : catalog_rows()) {
      doc.push_back({{"requirement_template", to_string(row.requirement_template)},
                     {"assertion_template", to_string(row.assertion_template)},
                     {"tool", to_string(row.tool)}});
    }
    io.out << doc.dump() << "\n";
    return kExitOk;
  }
  for (const auto& row : catalog_rows()) {
    io.out << to_string(row.requirement_template) << " -> " << to_string(row.assertion_template) << " -> "
           << to_string(row.tool) << "\n";
  }
  return kExitOk;
}

int cmd_parse_report(const fs::path& path, const Io& io) {
  const auto report = parse_report(read_file(path));
  const bool result = aggregate(report);
  if (io.g.json) {
    io.out << report_to_json(report).dump(2) << "\n";
  } else {
    io.out << report.requirement_id << " " << to_string(report.tool) << "\n";
    for (const auto& t : report.tables) {
      for (const auto& r : t.rows) io.out << "  [" << to_string(t.label) << "] " << r.assertion_name << ": " << (r.result ? "true" : "false") << "\n";
    }
    io.out << "aggregate: " << (result ? "true" : "false") << "\n";
  }
  return result ? kExitOk : kExitFalse;
}

// Maps every declared error class onto the exit-code contract.
template <typename F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const BackendError& e) {
    err << "evigen: " << e.what() << "\n";
    return e.kind() == BackendErrorKind::StubResults ? kExitInput : kExitBackend;
  } catch (const fs::filesystem_error& e) {
    err << "evigen: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    err << "evigen: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Requirements to verification assertions to assurance-case evidence", "evigen"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::string config_path;
  app.add_flag("-v,--verbose", g.verbose, "Print warnings and progress to stderr");
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--config", config_path, "Config file (default: $EVIGEN_CONFIG, then ./evigen.toml)");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate assertion files and a manifest from requirements");
  generate->add_option("--reqs", gen.reqs, "Requirements XML")->required();
  generate->add_option("--module", gen.module, "RoboChart module for refinement assertions");
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--semantics-naming", gen.naming, "Implementation process naming")
      ->check(CLI::IsMember({"plain", "robo"}));

  VerifyArgs ver;
  std::string stub_results;
  auto* verify = app.add_subcommand("verify", "Run verifiers over a manifest and collect reports");
  verify->add_option("--manifest", ver.manifest, "Assertion manifest")->required();
  verify->add_option("--backend", ver.backend, "exec or stub")->check(CLI::IsMember({"exec", "stub"}));
  verify->add_option("--stub-results", stub_results, "Stub verdicts (JSON)");
  verify->add_option("--out", ver.out, "Report directory")->required();

  IntegrateArgs integ;
  auto* integrate_cmd = app.add_subcommand("integrate", "Integrate verification reports into an assurance case");
  integrate_cmd->add_option("--reports", integ.reports, "Report directory")->required();
  integrate_cmd->add_option("--reqs", integ.reqs, "Requirements XML")->required();
  integrate_cmd->add_option("--ac", integ.ac, "Assurance case JSON, updated in place")->required();
  integrate_cmd->add_option("--timestamp", integ.timestamp, "Evidence time (UTC, default now)");

  fs::path render_ac;
  std::string render_out;
  auto* render = app.add_subcommand("render", "Export the assurance case as GSN-style DOT");
  render->add_option("--ac", render_ac, "Assurance case JSON")->required();
  render->add_option("--out", render_out, "DOT file (default stdout)");

  fs::path trace_ac, trace_reqs, trace_manifest;
  auto* trace = app.add_subcommand("trace", "Requirement -> claim -> assertion -> evidence matrix");
  trace->add_option("--ac", trace_ac, "Assurance case JSON")->required();
  trace->add_option("--reqs", trace_reqs, "Requirements XML")->required();
  trace->add_option("--manifest", trace_manifest, "Assertion manifest")->required();

  auto* catalog = app.add_subcommand("catalog", "List requirement template -> assertion template -> tool");

  fs::path report_path;
  auto* parse_report_cmd = app.add_subcommand("parse-report", "Parse one verification report");
  parse_report_cmd->add_option("report", report_path, "Report HTML or proof log")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (!config_path.empty()) g.config = config_path;
  if (!stub_results.empty()) ver.stub_results = stub_results;
  const Io io{out, err, g};

  return guarded(
      [&]() -> int {
        if (generate->parsed()) return cmd_generate(gen, io);
        if (verify->parsed()) return cmd_verify(ver, io);
        if (integrate_cmd->parsed()) return cmd_integrate(integ, io);
        if (render->parsed()) {
          return cmd_render(render_ac, render_out.empty() ? std::nullopt : std::optional<fs::path>(render_out), io);
        }
        if (trace->parsed()) return cmd_trace(trace_ac, trace_reqs, trace_manifest, io);
        if (catalog->parsed()) return cmd_catalog(io);
        return cmd_parse_report(report_path, io);
      },
      err);
}

}  // namespace evigen

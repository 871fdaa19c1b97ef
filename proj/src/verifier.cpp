#include "evigen/verifier.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>

#include "evigen/io.hpp"

namespace evigen {

std::string_view to_string(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::StubResults: return "StubResults";
    case BackendErrorKind::MissingBackend: return "MissingBackend";
    case BackendErrorKind::BackendFailure: return "BackendFailure";
  }
  return "";
}

std::string report_file_name(std::string_view claim_id, Tool tool) {
  if (tool == Tool::Isabelle) return std::string(claim_id) + ".log";
  return std::string(claim_id) + "." + std::string(to_string(tool)) + ".html";
}

namespace {

[[noreturn]] void bad_stub(const std::string& why) { throw BackendError(BackendErrorKind::StubResults, why); }

std::vector<bool> verdicts(const nlohmann::json& v, const std::string& where) {
  if (v.is_boolean()) return {v.get<bool>()};
  if (!v.is_array() || v.empty()) bad_stub(where + ": expected a boolean or a nonempty array of booleans");
  std::vector<bool> out;
  for (const auto& b : v) {
    if (!b.is_boolean()) bad_stub(where + ": array entries must be booleans");
    out.push_back(b.get<bool>());
  }
  return out;
}

// Manifest entries sharing one assertion file, in manifest order.
struct FileGroup {
  std::string claim;
  std::string file;
  Tool tool = Tool::FDR;
  std::vector<const ManifestEntry*> entries;
};

std::vector<FileGroup> group_by_file(std::span<const ManifestEntry> manifest) {
  std::vector<FileGroup> groups;
  for (const auto& e : manifest) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const FileGroup& g) { return g.file == e.file; });
    if (it == groups.end()) {
      groups.push_back({e.claim, e.file, e.tool, {}});
      it = std::prev(groups.end());
    }
    it->entries.push_back(&e);
  }
  return groups;
}

ReportTable stub_table(const StubResults& results, const std::string& claim, TableLabel label,
                       const std::vector<std::string>& names) {
  const auto values = results.rows(claim, label, names.size());
  ReportTable t{label, {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto name = names[i % names.size()];
    if (i >= names.size()) name += "#" + std::to_string(i / names.size() + 1);
    t.rows.push_back({name, values[i], values[i] ? "" : "counterexample available"});
  }
  return t;
}

}  // namespace

StubResults StubResults::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) bad_stub("stub results must be an object keyed by claim id");
  StubResults out;
  for (const auto& [claim, v] : doc.items()) {
    auto& slot = out.by_claim_[claim];
    if (!v.is_object()) {
      slot[""] = {verdicts(v, "claim '" + claim + "'")};
      continue;
    }
    for (const auto& [label, lv] : v.items()) {
      if (label != "untimed" && label != "timed" && label != "probabilistic" && label != "proof") {
        bad_stub("claim '" + claim + "': unknown table label '" + label + "'");
      }
      slot[label] = {verdicts(lv, "claim '" + claim + "' table '" + label + "'")};
    }
  }
  return out;
}

std::vector<bool> StubResults::rows(std::string_view claim_id, TableLabel label, std::size_t rows) const {
  std::vector<bool> values(rows, true);
  const auto it = by_claim_.find(claim_id);
  if (it == by_claim_.end()) return values;
  auto spec = it->second.find(std::string(to_string(label)));
  if (spec == it->second.end()) spec = it->second.find("");
  if (spec == it->second.end()) return values;
  const auto& v = spec->second.values;
  if (v.size() == 1) return std::vector<bool>(rows, v.front());
  return v;
}

std::vector<ReportFile> run_stub(std::span<const ManifestEntry> manifest, const std::filesystem::path& manifest_dir,
                                 const StubResults& results) {
  std::vector<ReportFile> out;
  for (const auto& g : group_by_file(manifest)) {
    if (g.tool == Tool::Isabelle) {
      const auto lemma = read_file(manifest_dir / g.file);
      const auto verdict = results.rows(g.claim, TableLabel::proof, 1);
      const bool ok = std::all_of(verdict.begin(), verdict.end(), [](bool b) { return b; });
      out.push_back({report_file_name(g.claim, g.tool), render_isabelle_log(g.claim, lemma, ok)});
      continue;
    }
    VerificationReport report;
    report.requirement_id = g.claim;
    report.tool = g.tool;
    if (g.tool == Tool::PRISM) {
      std::vector<std::string> names;
      for (const auto* e : g.entries) names.push_back(e->assertion_id);
      report.tables.push_back(stub_table(results, g.claim, TableLabel::probabilistic, names));
    } else {
      for (auto label : {TableLabel::untimed, TableLabel::timed}) {
        std::vector<std::string> names;
        for (const auto* e : g.entries) {
          const bool in_table = e->time_label == TimeLabel::both ||
                                (label == TableLabel::untimed) == (e->time_label == TimeLabel::untimed);
          if (in_table) names.push_back(e->assertion_id);
        }
        if (!names.empty()) report.tables.push_back(stub_table(results, g.claim, label, names));
      }
    }
    out.push_back({report_file_name(g.claim, g.tool), render_report_html(report)});
  }
  return out;
}

std::vector<std::string> expand_argv(std::span<const std::string> argv, std::string_view file, std::string_view claim,
                                     std::string_view dir) {
  std::vector<std::string> out;
  for (const auto& arg : argv) {
    std::string a;
    for (std::size_t i = 0; i < arg.size();) {
      const auto rest = std::string_view(arg).substr(i);
      if (rest.starts_with("{file}")) {
        a += file, i += 6;
      } else if (rest.starts_with("{claim}")) {
        a += claim, i += 7;
      } else if (rest.starts_with("{dir}")) {
        a += dir, i += 5;
      } else {
        a += arg[i++];
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

[[noreturn]] void backend_failure(const std::string& why) {
  throw BackendError(BackendErrorKind::BackendFailure, why);
}

std::string capture_stdout(const std::vector<std::string>& argv) {
  int fds[2];
  if (pipe(fds) != 0) backend_failure(std::string("pipe: ") + std::strerror(errno));
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    backend_failure(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
  }
  close(fds[1]);
  std::string out;
  char buf[4096];
  while (true) {
    const auto n = read(fds[0], buf, sizeof buf);
    if (n > 0) {
      out.append(buf, static_cast<std::size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      break;
    }
  }
  close(fds[0]);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) backend_failure("cannot run '" + argv.front() + "'");
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    backend_failure("'" + argv.front() + "' exited with status " +
                    std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status)));
  }
  return out;
}

}  // namespace

std::vector<ReportFile> run_exec(std::span<const ManifestEntry> manifest, const std::filesystem::path& manifest_dir,
                                 const Config& config) {
  const auto groups = group_by_file(manifest);
  for (const auto& g : groups) {
    if (!config.backends.contains(g.tool)) {
      throw BackendError(BackendErrorKind::MissingBackend,
                         "no backend command configured for " + std::string(to_string(g.tool)));
    }
  }
  const auto dir = std::filesystem::absolute(manifest_dir);
  std::vector<ReportFile> out;
  for (const auto& g : groups) {
    const auto argv = expand_argv(config.backends.at(g.tool), (dir / g.file).string(), g.claim, dir.string());
    out.push_back({report_file_name(g.claim, g.tool), capture_stdout(argv)});
  }
  return out;
}

}  // namespace evigen

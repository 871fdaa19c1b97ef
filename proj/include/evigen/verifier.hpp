#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "evigen/assertion.hpp"
#include "evigen/config.hpp"
#include "evigen/error.hpp"
#include "evigen/report.hpp"

namespace evigen {

enum class BackendErrorKind { StubResults, MissingBackend, BackendFailure };
std::string_view to_string(BackendErrorKind kind);
using BackendError = Error<BackendErrorKind>;

struct ReportFile {
  std::string name;  // file name inside the report directory
  std::string bytes;
};

/// `<claim>.<tool>.html` for FDR/PRISM, `<claim>.log` for Isabelle.
std::string report_file_name(std::string_view claim_id, Tool tool);

/// Stub verdicts keyed by claim id. A value is a boolean (every row), an array
/// of booleans (one per row), or an object from table label (`untimed`,
/// `timed`, `probabilistic`, `proof`) to either of those. Claims without an
/// entry pass. Throws BackendError{StubResults}.
class StubResults {
 public:
  StubResults() = default;
  static StubResults from_json(const nlohmann::json& doc);

  /// Row verdicts for `rows` assertions of one table.
  std::vector<bool> rows(std::string_view claim_id, TableLabel label, std::size_t rows) const;

 private:
  struct Spec {
    std::vector<bool> values;  // size 1 broadcasts
  };
  std::map<std::string, std::map<std::string, Spec>, std::less<>> by_claim_;  // "" label = any table
};

/// Synthesizes reports in the formats the report parsers accept. Assertion
/// files are read from `manifest_dir`.
std::vector<ReportFile> run_stub(std::span<const ManifestEntry> manifest, const std::filesystem::path& manifest_dir,
                                 const StubResults& results);

/// Runs the configured command per assertion file with no shell and captures
/// stdout as the report. Fails as a whole: throws BackendError{MissingBackend,
/// BackendFailure} before anything is returned.
std::vector<ReportFile> run_exec(std::span<const ManifestEntry> manifest, const std::filesystem::path& manifest_dir,
                                 const Config& config);

/// Argv template substitution of `{file}`, `{claim}` and `{dir}`.
std::vector<std::string> expand_argv(std::span<const std::string> argv, std::string_view file, std::string_view claim,
                                     std::string_view dir);

}  // namespace evigen

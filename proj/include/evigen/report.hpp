#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "evigen/catalog.hpp"
#include "evigen/error.hpp"

namespace evigen {

enum class ReportErrorKind { TitleUnrecognized, HtmlStructure, ResultUnparsable, TableCount, LogUnrecognized };
std::string_view to_string(ReportErrorKind kind);
using ReportError = Error<ReportErrorKind>;

enum class TableLabel { untimed, timed, probabilistic, proof };
std::string_view to_string(TableLabel label);

struct ReportRow {
  std::string assertion_name;
  bool result = false;
  std::string detail;  // kept raw
  bool operator==(const ReportRow&) const = default;
};

struct ReportTable {
  TableLabel label = TableLabel::untimed;
  std::vector<ReportRow> rows;
  bool operator==(const ReportTable&) const = default;
};

struct VerificationReport {
  std::string requirement_id;
  Tool tool = Tool::FDR;
  std::vector<ReportTable> tables;
  std::string raw_title;
  bool operator==(const VerificationReport&) const = default;
};

struct ReportTitle {
  std::string requirement_id;
  Tool tool = Tool::FDR;
  TableLabel label = TableLabel::untimed;
};

/// `Results of <label> analysis of assertions in <id>.assertions using <tool>`.
std::string format_report_title(std::string_view requirement_id, Tool tool, TableLabel label);

/// Left inverse of format_report_title. Throws ReportError{TitleUnrecognized}.
ReportTitle parse_report_title(std::string_view title);

/// Throws ReportError{HtmlStructure, ResultUnparsable, TitleUnrecognized, TableCount}.
VerificationReport parse_fdr_report(std::string_view html);

/// Exactly one table. Throws as parse_fdr_report.
VerificationReport parse_prism_report(std::string_view html);

/// Throws ReportError{LogUnrecognized}.
VerificationReport parse_isabelle_log(std::string_view log);

/// HTML reports are dispatched on the tool named in their title; anything
/// without a `<table` is read as an Isabelle log.
VerificationReport parse_report(std::string_view bytes);

/// Result cell vocabulary: true/false/passed/failed, case-insensitive.
std::optional<bool> parse_result_cell(std::string_view cell);

/// PRISM: rows of the first table. FDR: every table. Isabelle: the single row.
/// A report with no tables aggregates to false.
bool aggregate(const VerificationReport& report);

/// Report HTML in the subset the parsers accept.
std::string render_report_html(const VerificationReport& report);

/// Proof log in the format parse_isabelle_log accepts.
std::string render_isabelle_log(std::string_view claim_id, std::string_view lemma_text, bool result);

nlohmann::json report_to_json(const VerificationReport& report);

/// Recovers the claim id from generated assertion text (`A_<id>`, `P_<id>`,
/// `R_<id>`, `T_<id>`, `<id>_deadlock_free`).
std::optional<std::string> extract_claim_id(std::string_view assertion_text);

}  // namespace evigen

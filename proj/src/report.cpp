#include "evigen/report.hpp"

#include <algorithm>
#include <array>

#include "text.hpp"

namespace evigen {

std::string_view to_string(ReportErrorKind kind) {
  switch (kind) {
    case ReportErrorKind::TitleUnrecognized: return "TitleUnrecognized";
    case ReportErrorKind::HtmlStructure: return "HtmlStructure";
    case ReportErrorKind::ResultUnparsable: return "ResultUnparsable";
    case ReportErrorKind::TableCount: return "TableCount";
    case ReportErrorKind::LogUnrecognized: return "LogUnrecognized";
  }
  return "";
}

std::string_view to_string(TableLabel label) {
  switch (label) {
    case TableLabel::untimed: return "untimed";
    case TableLabel::timed: return "timed";
    case TableLabel::probabilistic: return "probabilistic";
    case TableLabel::proof: return "proof";
  }
  return "";
}

namespace {

[[noreturn]] void fail(ReportErrorKind kind, const std::string& message) { throw ReportError(kind, message); }

std::string clip(std::string_view s) {
  constexpr std::size_t kMax = 80;
  return s.size() <= kMax ? std::string(s) : std::string(s.substr(0, kMax)) + "...";
}

}  // namespace

std::string format_report_title(std::string_view requirement_id, Tool tool, TableLabel label) {
  return "Results of " + std::string(to_string(label)) + " analysis of assertions in " + std::string(requirement_id) +
         ".assertions using " + std::string(to_string(tool));
}

ReportTitle parse_report_title(std::string_view title) {
  const auto t = text::collapse_whitespace(title);
  std::string_view s = t;
  auto expect = [&](std::string_view word) {
    if (!s.starts_with(word)) fail(ReportErrorKind::TitleUnrecognized, "'" + clip(t) + "'");
    s.remove_prefix(word.size());
  };
  auto next_token = [&]() {
    const auto end = std::min(s.find(' '), s.size());
    const auto token = s.substr(0, end);
    s.remove_prefix(end);
    return token;
  };

  const auto start = s.find("Results of ");
  if (start == std::string_view::npos) fail(ReportErrorKind::TitleUnrecognized, "'" + clip(t) + "'");
  s.remove_prefix(start + std::string_view("Results of ").size());

  ReportTitle out;
  const auto label = next_token();
  if (label == "untimed") {
    out.label = TableLabel::untimed;
  } else if (label == "timed") {
    out.label = TableLabel::timed;
  } else if (label == "probabilistic") {
    out.label = TableLabel::probabilistic;
  } else if (label == "proof") {
    out.label = TableLabel::proof;
  } else {
    fail(ReportErrorKind::TitleUnrecognized, "unknown analysis kind in '" + clip(t) + "'");
  }
  expect(" analysis of assertions in ");
  const auto file = next_token();
  constexpr std::string_view kExt = ".assertions";
  if (!file.ends_with(kExt) || file.size() == kExt.size()) {
    fail(ReportErrorKind::TitleUnrecognized, "no <id>.assertions in '" + clip(t) + "'");
  }
  out.requirement_id = std::string(file.substr(0, file.size() - kExt.size()));
  expect(" using ");
  auto tool = next_token();
  if (tool.ends_with('.')) tool.remove_suffix(1);
  const auto parsed = tool_from_string(tool);
  if (!parsed) fail(ReportErrorKind::TitleUnrecognized, "unknown tool in '" + clip(t) + "'");
  out.tool = *parsed;
  return out;
}

std::optional<bool> parse_result_cell(std::string_view cell) {
  const auto v = text::to_lower(text::trim(cell));
  if (v == "true" || v == "passed") return true;
  if (v == "false" || v == "failed") return false;
  return std::nullopt;
}

namespace {

std::string decode_entities(std::string_view s) {
  static constexpr std::array<std::pair<std::string_view, char>, 6> kEntities{{
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}, {"&nbsp;", ' '},
  }};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    if (s[i] == '&') {
      for (const auto& [name, c] : kEntities) {
        if (s.substr(i).starts_with(name)) {
          out.push_back(c);
          i += name.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
  return out;
}

std::string escape_html(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct RawTable {
  std::string title;
  std::vector<std::vector<std::string>> rows;  // data rows only
};

/// Reads the table/title skeleton of the accepted HTML subset. Anything
/// outside `<h2>`, `<caption>` and tables is ignored.
class HtmlScanner {
 public:
  explicit HtmlScanner(std::string_view html) : s_(html) {}

  std::vector<RawTable> scan() {
    while (pos_ < s_.size()) {
      const auto lt = s_.find('<', pos_);
      if (lt == std::string_view::npos) {
        text(s_.substr(pos_));
        break;
      }
      text(s_.substr(pos_, lt - pos_));
      pos_ = lt;
      tag();
    }
    if (in_table_) fail(ReportErrorKind::HtmlStructure, "unterminated <table>");
    return std::move(tables_);
  }

 private:
  void text(std::string_view chunk) {
    if (capture_ != nullptr) capture_->append(chunk);
  }

  void tag() {
    if (s_.substr(pos_).starts_with("<!--")) {
      const auto end = s_.find("-->", pos_ + 4);
      pos_ = end == std::string_view::npos ? s_.size() : end + 3;
      return;
    }
    const auto gt = s_.find('>', pos_);
    if (gt == std::string_view::npos) fail(ReportErrorKind::HtmlStructure, "unterminated tag");
    auto inner = s_.substr(pos_ + 1, gt - pos_ - 1);
    pos_ = gt + 1;
    if (inner.empty() || inner.front() == '!' || inner.front() == '?') return;
    bool closing = false;
    if (inner.front() == '/') {
      closing = true;
      inner.remove_prefix(1);
    }
    std::size_t n = 0;
    while (n < inner.size() && std::isalnum(static_cast<unsigned char>(inner[n])) != 0) ++n;
    const auto name = text::to_lower(inner.substr(0, n));
    closing ? close(name) : open(name);
  }

  void open(const std::string& name) {
    if (name == "table") {
      if (in_table_) fail(ReportErrorKind::HtmlStructure, "nested <table>");
      in_table_ = true;
      tables_.push_back({text::collapse_whitespace(decode_entities(pending_title_)), {}});
      pending_title_.clear();
    } else if (name == "h2") {
      if (in_table_) fail(ReportErrorKind::HtmlStructure, "<h2> inside <table>");
      pending_title_.clear();
      capture_ = &pending_title_;
    } else if (name == "caption") {
      if (!in_table_) fail(ReportErrorKind::HtmlStructure, "<caption> outside <table>");
      caption_.clear();
      capture_ = &caption_;
    } else if (name == "tr") {
      if (!in_table_) fail(ReportErrorKind::HtmlStructure, "<tr> outside <table>");
      end_row();
      in_row_ = true;
    } else if (name == "td" || name == "th") {
      if (!in_row_) fail(ReportErrorKind::HtmlStructure, "<" + name + "> outside <tr>");
      end_cell();
      cells_.emplace_back();
      header_cells_ += name == "th" ? 1 : 0;
      capture_ = &cells_.back();
    }
  }

  void close(const std::string& name) {
    if (name == "h2") {
      capture_ = nullptr;
    } else if (name == "caption") {
      capture_ = nullptr;
      if (in_table_) tables_.back().title = text::collapse_whitespace(decode_entities(caption_));
    } else if (name == "td" || name == "th") {
      end_cell();
    } else if (name == "tr") {
      end_row();
    } else if (name == "table") {
      if (!in_table_) fail(ReportErrorKind::HtmlStructure, "</table> without <table>");
      end_row();
      in_table_ = false;
    }
  }

  void end_cell() {
    if (!cells_.empty() && capture_ == &cells_.back()) capture_ = nullptr;
  }

  void end_row() {
    end_cell();
    if (in_row_ && !cells_.empty() && header_cells_ < cells_.size()) {
      std::vector<std::string> row;
      for (const auto& c : cells_) row.push_back(text::collapse_whitespace(decode_entities(c)));
      tables_.back().rows.push_back(std::move(row));
    }
    cells_.clear();
    header_cells_ = 0;
    in_row_ = false;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<RawTable> tables_;
  std::string pending_title_;
  std::string caption_;
  std::vector<std::string> cells_;
  std::size_t header_cells_ = 0;
  std::string* capture_ = nullptr;
  bool in_table_ = false;
  bool in_row_ = false;
};

VerificationReport parse_html_report(std::string_view html, Tool expected) {
  auto raw = HtmlScanner(html).scan();
  if (raw.empty()) {
    if (expected == Tool::PRISM) fail(ReportErrorKind::TableCount, "PRISM report has no table");
    fail(ReportErrorKind::HtmlStructure, "report has no table");
  }
  VerificationReport report;
  report.tool = expected;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& t = raw[i];
    if (t.title.empty()) fail(ReportErrorKind::HtmlStructure, "table " + std::to_string(i + 1) + " has no title");
    const auto title = parse_report_title(t.title);
    if (title.tool != expected) {
      fail(ReportErrorKind::HtmlStructure, "table titled for " + std::string(to_string(title.tool)) +
                                               " in a " + std::string(to_string(expected)) + " report");
    }
    const bool label_ok = expected == Tool::PRISM ? title.label == TableLabel::probabilistic
                                                  : title.label == TableLabel::untimed || title.label == TableLabel::timed;
    if (!label_ok) {
      fail(ReportErrorKind::HtmlStructure, std::string(to_string(title.label)) + " table in a " +
                                               std::string(to_string(expected)) + " report");
    }
    if (i == 0) {
      report.requirement_id = title.requirement_id;
      report.raw_title = t.title;
    } else if (title.requirement_id != report.requirement_id) {
      fail(ReportErrorKind::HtmlStructure, "tables name different requirements");
    }
    for (const auto& prior : report.tables) {
      if (prior.label == title.label) fail(ReportErrorKind::HtmlStructure, "duplicate " + std::string(to_string(title.label)) + " table");
    }
    if (t.rows.empty()) fail(ReportErrorKind::HtmlStructure, "table '" + clip(t.title) + "' has no data rows");
    ReportTable table;
    table.label = title.label;
    for (const auto& cells : t.rows) {
      if (cells.size() < 2) fail(ReportErrorKind::HtmlStructure, "data row with fewer than 2 cells");
      const auto result = parse_result_cell(cells[1]);
      if (!result) fail(ReportErrorKind::ResultUnparsable, "'" + clip(cells[1]) + "'");
      table.rows.push_back({cells[0], *result, cells.size() > 2 ? cells[2] : std::string()});
    }
    report.tables.push_back(std::move(table));
  }
  const std::size_t max_tables = expected == Tool::PRISM ? 1 : 2;
  if (report.tables.size() > max_tables) {
    fail(ReportErrorKind::TableCount, std::string(to_string(expected)) + " report has " +
                                          std::to_string(report.tables.size()) + " tables");
  }
  return report;
}

}  // namespace

VerificationReport parse_fdr_report(std::string_view html) { return parse_html_report(html, Tool::FDR); }

VerificationReport parse_prism_report(std::string_view html) { return parse_html_report(html, Tool::PRISM); }

VerificationReport parse_isabelle_log(std::string_view log) {
  constexpr std::string_view kSuffix = "_deadlock_free";
  std::string lemma;
  std::string last_line;
  bool error_line = false;
  for (auto line : text::split(log, "\n")) {
    line = text::trim(line);
    if (line.empty()) continue;
    last_line = std::string(line);
    if (line.starts_with("***")) error_line = true;
    if (!lemma.empty() || !line.starts_with("lemma ")) continue;
    auto rest = text::trim(line.substr(6));
    const auto end = std::min(rest.find_first_of(": \t\""), rest.size());
    const auto name = rest.substr(0, end);
    if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) lemma = std::string(name);
  }
  if (lemma.empty()) fail(ReportErrorKind::LogUnrecognized, "no lemma <claim>_deadlock_free in log");

  const auto status_end = std::min(last_line.find_first_of(" \t:("), last_line.size());
  const auto status = text::to_lower(std::string_view(last_line).substr(0, status_end));
  bool result = false;
  if (status == "finished") {
    result = !error_line;
  } else if (status == "failed" || status == "error" || status == "unfinished") {
    result = false;
  } else {
    fail(ReportErrorKind::LogUnrecognized, "no terminal status line (last line '" + clip(last_line) + "')");
  }
  VerificationReport report;
  report.requirement_id = lemma.substr(0, lemma.size() - kSuffix.size());
  report.tool = Tool::Isabelle;
  report.raw_title = "lemma " + lemma;
  report.tables.push_back({TableLabel::proof, {{lemma, result, last_line}}});
  return report;
}

VerificationReport parse_report(std::string_view bytes) {
  const auto lowered = text::to_lower(bytes);
  if (lowered.find("<table") == std::string::npos) return parse_isabelle_log(bytes);
  // The first title decides which parser applies.
  const auto pos = bytes.find("Results of ");
  if (pos == std::string_view::npos) fail(ReportErrorKind::HtmlStructure, "no report title");
  const auto end = bytes.find('<', pos);
  const auto title = parse_report_title(bytes.substr(pos, end == std::string_view::npos ? bytes.size() - pos : end - pos));
  switch (title.tool) {
    case Tool::FDR: return parse_fdr_report(bytes);
    case Tool::PRISM: return parse_prism_report(bytes);
    case Tool::Isabelle: fail(ReportErrorKind::HtmlStructure, "Isabelle results are logs, not HTML tables");
  }
  fail(ReportErrorKind::HtmlStructure, "unknown tool");
}

bool aggregate(const VerificationReport& report) {
  if (report.tables.empty()) return false;
  auto table_result = [](const ReportTable& t) {
    return std::all_of(t.rows.begin(), t.rows.end(), [](const ReportRow& r) { return r.result; });
  };
  switch (report.tool) {
    case Tool::PRISM: return table_result(report.tables.front());
    case Tool::FDR: return std::all_of(report.tables.begin(), report.tables.end(), table_result);
    case Tool::Isabelle: return !report.tables.front().rows.empty() && report.tables.front().rows.front().result;
  }
  return false;
}

std::string render_report_html(const VerificationReport& report) {
  std::string out = "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>Verification results</title></head>\n<body>\n";
  for (const auto& t : report.tables) {
    out += "<h2>" + escape_html(format_report_title(report.requirement_id, report.tool, t.label)) + "</h2>\n";
    out += "<table>\n<tr><th>Assertion</th><th>Result</th><th>Detail</th></tr>\n";
    for (const auto& r : t.rows) {
      out += "<tr><td>" + escape_html(r.assertion_name) + "</td><td>" + (r.result ? "true" : "false") + "</td><td>" +
             escape_html(r.detail) + "</td></tr>\n";
    }
    out += "</table>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

std::string render_isabelle_log(std::string_view claim_id, std::string_view lemma_text, bool result) {
  std::string out = "Running " + std::string(claim_id) + " ...\n";
  out += lemma_text;
  if (!out.ends_with('\n')) out += '\n';
  if (!result) out += "*** Failed to apply proof method\n";
  out += result ? "Finished\n" : "Failed\n";
  return out;
}

nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : report.tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) rows.push_back({{"assertion", r.assertion_name}, {"result", r.result}, {"detail", r.detail}});
    tables.push_back({{"label", to_string(t.label)}, {"rows", rows}});
  }
  return {{"requirement_id", report.requirement_id},
          {"tool", to_string(report.tool)},
          {"raw_title", report.raw_title},
          {"tables", tables},
          {"aggregate", aggregate(report)}};
}

std::optional<std::string> extract_claim_id(std::string_view assertion_text) {
  for (auto line : text::split(assertion_text, "\n")) {
    const auto l = text::collapse_whitespace(line);
    std::string_view s = l;
    auto token_after = [&](std::string_view marker) -> std::optional<std::string_view> {
      const auto pos = s.find(marker);
      if (pos == std::string_view::npos || (pos != 0 && s[pos - 1] != ' ')) return std::nullopt;
      auto rest = s.substr(pos + marker.size());
      const auto end = std::min(rest.find_first_of(" :"), rest.size());
      return rest.substr(0, end);
    };
    if (auto t = token_after("assertion "); t && t->starts_with("A_") && t->size() > 2) return std::string(t->substr(2));
    if (auto t = token_after("prob property "); t && t->size() > 2 && (*t)[1] == '_' &&
                                                 ((*t)[0] == 'P' || (*t)[0] == 'R' || (*t)[0] == 'T')) {
      return std::string(t->substr(2));
    }
    if (auto t = token_after("lemma "); t && t->ends_with("_deadlock_free") && t->size() > 14) {
      return std::string(t->substr(0, t->size() - 14));
    }
  }
  return std::nullopt;
}

}  // namespace evigen

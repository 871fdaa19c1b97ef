#include "support.hpp"

#include <unistd.h>

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "evigen/cli.hpp"

namespace evigen::testing {

namespace fs = std::filesystem;

fs::path fixture(std::string_view relative) { return fs::path(EVIGEN_FIXTURE_DIR) / relative; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
    } else if (word(c)) {
      const auto start = i;
      while (i < text.size() && word(text[i])) ++i;
      out.emplace_back(text.substr(start, i - start));
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

TempDir::TempDir() {
  static int counter = 0;
  path_ = fs::temp_directory_path() /
          ("evigen-test-" + std::to_string(getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// DOT ------------------------------------------------------------------------

namespace {

enum class Tok { Id, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Eq, Colon, Arrow, Dash, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  bool keyword_ok = false;  // unquoted, so it may be a keyword
};

class DotLexer {
 public:
  explicit DotLexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip();
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", false});
        return out;
      }
      const char c = s_[i_];
      switch (c) {
        case '{': out.push_back(punct(Tok::LBrace)); continue;
        case '}': out.push_back(punct(Tok::RBrace)); continue;
        case '[': out.push_back(punct(Tok::LBracket)); continue;
        case ']': out.push_back(punct(Tok::RBracket)); continue;
        case ';': out.push_back(punct(Tok::Semi)); continue;
        case ',': out.push_back(punct(Tok::Comma)); continue;
        case '=': out.push_back(punct(Tok::Eq)); continue;
        case ':': out.push_back(punct(Tok::Colon)); continue;
        default: break;
      }
      if (c == '-' && i_ + 1 < s_.size() && (s_[i_ + 1] == '>' || s_[i_ + 1] == '-')) {
        out.push_back({s_[i_ + 1] == '>' ? Tok::Arrow : Tok::Dash, std::string(s_.substr(i_, 2)), false});
        i_ += 2;
        continue;
      }
      if (c == '"') {
        out.push_back(quoted());
        continue;
      }
      if (c == '<') {
        out.push_back(html());
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
        const auto start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) != 0 || s_[i_] == '_' ||
                                  static_cast<unsigned char>(s_[i_]) >= 0x80)) {
          ++i_;
        }
        out.push_back({Tok::Id, std::string(s_.substr(start, i_ - start)), true});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' || c == '-') {
        out.push_back(numeral());
        continue;
      }
      throw std::runtime_error(std::string("unexpected character '") + c + "' at offset " + std::to_string(i_));
    }
  }

 private:
  Token punct(Tok k) { return {k, std::string(1, s_[i_++]), false}; }

  void skip() {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        ++i_;
      } else if (s_.substr(i_).starts_with("//") || (c == '#' && (i_ == 0 || s_[i_ - 1] == '\n'))) {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else if (s_.substr(i_).starts_with("/*")) {
        const auto end = s_.find("*/", i_ + 2);
        if (end == std::string_view::npos) throw std::runtime_error("unterminated comment");
        i_ = end + 2;
      } else {
        return;
      }
    }
  }

  Token quoted() {
    std::string v;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size() && s_[i_ + 1] == '"') {
        v.push_back('"');
        i_ += 2;
      } else if (s_[i_] == '\\' && i_ + 1 < s_.size() && s_[i_ + 1] == '\n') {
        i_ += 2;
      } else {
        v.push_back(s_[i_++]);
      }
    }
    if (i_ >= s_.size()) throw std::runtime_error("unterminated quoted string");
    ++i_;
    return {Tok::Id, v, false};
  }

  Token html() {
    int depth = 0;
    const auto start = i_;
    while (i_ < s_.size()) {
      if (s_[i_] == '<') ++depth;
      if (s_[i_] == '>' && --depth == 0) {
        ++i_;
        return {Tok::Id, std::string(s_.substr(start, i_ - start)), false};
      }
      ++i_;
    }
    throw std::runtime_error("unterminated HTML string");
  }

  Token numeral() {
    const auto start = i_;
    if (s_[i_] == '-') ++i_;
    bool digits = false;
    bool dot = false;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) != 0 || (s_[i_] == '.' && !dot))) {
      dot = dot || s_[i_] == '.';
      digits = digits || s_[i_] != '.';
      ++i_;
    }
    if (!digits) throw std::runtime_error("malformed numeral at offset " + std::to_string(start));
    return {Tok::Id, std::string(s_.substr(start, i_ - start)), false};
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

class DotParser {
 public:
  DotParser(std::vector<Token> toks, DotGraph& g) : t_(std::move(toks)), g_(g) {}

  void graph() {
    if (keyword("strict")) ++p_;
    if (keyword("digraph")) {
      g_.directed = true;
    } else if (!keyword("graph")) {
      fail("expected graph or digraph");
    }
    ++p_;
    if (peek().kind == Tok::Id && !is_keyword(peek())) g_.name = t_[p_++].text;
    expect(Tok::LBrace, "'{'");
    stmt_list();
    expect(Tok::RBrace, "'}'");
    if (peek().kind != Tok::End) fail("trailing input after graph");
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return t_[std::min(p_ + ahead, t_.size() - 1)]; }
  bool keyword(const char* k, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Id && peek(ahead).keyword_ok && lower(peek(ahead).text) == k;
  }
  bool is_keyword(const Token& t) const {
    if (!t.keyword_ok) return false;
    const auto l = lower(t.text);
    return l == "node" || l == "edge" || l == "graph" || l == "digraph" || l == "subgraph" || l == "strict";
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::runtime_error(why + " near token " + std::to_string(p_) + " '" + peek().text + "'");
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++p_;
  }
  std::string id() {
    if (peek().kind != Tok::Id || is_keyword(peek())) fail("expected ID");
    return t_[p_++].text;
  }

  void stmt_list() {
    while (peek().kind != Tok::RBrace && peek().kind != Tok::End) {
      stmt();
      if (peek().kind == Tok::Semi) ++p_;
    }
  }

  void stmt() {
    if (keyword("graph") || keyword("node") || keyword("edge")) {
      ++p_;
      std::map<std::string, std::string> ignored;
      attr_list(ignored, true);
      return;
    }
    if (peek().kind == Tok::Id && !is_keyword(peek()) && peek(1).kind == Tok::Eq) {
      id();
      ++p_;
      id();
      return;
    }
    std::vector<std::string> lhs = operand();
    if (peek().kind == Tok::Arrow || peek().kind == Tok::Dash) {
      std::vector<std::pair<std::string, std::string>> edges;
      while (peek().kind == Tok::Arrow || peek().kind == Tok::Dash) {
        if ((peek().kind == Tok::Arrow) != g_.directed) fail("edge operator does not match graph kind");
        ++p_;
        auto rhs = operand();
        for (const auto& a : lhs) {
          for (const auto& b : rhs) edges.emplace_back(a, b);
        }
        lhs = std::move(rhs);
      }
      std::map<std::string, std::string> attrs;
      if (peek().kind == Tok::LBracket) attr_list(attrs, true);
      for (auto& e : edges) {
        g_.nodes.try_emplace(e.first);
        g_.nodes.try_emplace(e.second);
        g_.edges.push_back(e);
        g_.edge_attrs.push_back(attrs);
      }
      return;
    }
    if (lhs.size() == 1 && !last_was_subgraph_) {
      auto& attrs = g_.nodes[lhs.front()];
      if (peek().kind == Tok::LBracket) attr_list(attrs, true);
    }
  }

  // node_id or subgraph; returns the node ids it denotes.
  std::vector<std::string> operand() {
    last_was_subgraph_ = false;
    if (keyword("subgraph") || peek().kind == Tok::LBrace) {
      if (keyword("subgraph")) {
        ++p_;
        if (peek().kind == Tok::Id && !is_keyword(peek())) ++p_;
      }
      const auto before = g_.nodes;
      expect(Tok::LBrace, "'{'");
      stmt_list();
      expect(Tok::RBrace, "'}'");
      last_was_subgraph_ = true;
      std::vector<std::string> added;
      for (const auto& [k, v] : g_.nodes) {
        if (!before.contains(k)) added.push_back(k);
      }
      return added;
    }
    auto n = id();
    if (peek().kind == Tok::Colon) {
      ++p_;
      id();
      if (peek().kind == Tok::Colon) {
        ++p_;
        id();
      }
    }
    g_.nodes.try_emplace(n);
    return {n};
  }

  void attr_list(std::map<std::string, std::string>& into, bool required) {
    if (required && peek().kind != Tok::LBracket) fail("expected '['");
    while (peek().kind == Tok::LBracket) {
      ++p_;
      while (peek().kind != Tok::RBracket) {
        auto key = id();
        expect(Tok::Eq, "'='");
        into[key] = id();
        if (peek().kind == Tok::Comma || peek().kind == Tok::Semi) ++p_;
      }
      ++p_;
    }
  }

  std::vector<Token> t_;
  std::size_t p_ = 0;
  DotGraph& g_;
  bool last_was_subgraph_ = false;
};

}  // namespace

bool parse_dot(std::string_view text, DotGraph& graph, std::string& why) {
  graph = {};
  try {
    DotParser(DotLexer(text).run(), graph).graph();
    return true;
  } catch (const std::runtime_error& e) {
    why = e.what();
    return false;
  }
}

// Reports ---------------------------------------------------------------------

namespace {

std::string verdict_word(bool v, std::mt19937_64& rng) {
  std::string w = v ? (rng() % 2 ? "true" : "passed") : (rng() % 2 ? "false" : "failed");
  switch (rng() % 3) {
    case 0: break;
    case 1: w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0]))); break;
    default:
      for (auto& c : w) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return w;
}

std::string pad(std::mt19937_64& rng) {
  static const char* kPads[] = {"", " ", "\n", "  \n\t", "\n    "};
  return kPads[rng() % 5];
}

std::string random_claim(std::mt19937_64& rng) {
  static const char* kStems[] = {"SR1_1_1", "DTI-2", "R3", "VR_9", "case.7", "x"};
  return std::string(kStems[rng() % 6]) + (rng() % 2 ? "_" + std::to_string(rng() % 100) : "");
}

}  // namespace

FakeReport random_report(std::mt19937_64& rng) {
  FakeReport r;
  r.tool = static_cast<FakeTool>(rng() % 3);
  r.claim = random_claim(rng);
  auto p = [&] { return pad(rng); };

  if (r.tool == FakeTool::Isabelle) {
    const bool ok = rng() % 2 == 0;
    r.tables = {{ok}};
    std::string log = "Running " + r.claim + " ..." + "\n";
    if (rng() % 2) log += "theory T imports Main begin\n";
    log += "lemma " + r.claim + "_deadlock_free: \"deadlock_free M\"\n  apply deadlock_free\n";
    if (!ok && rng() % 2) log += "*** Failed to apply proof method\n";
    log += ok ? (rng() % 2 ? "Finished\n" : "Finished " + r.claim + " (0:00:03 elapsed time)\n")
              : (rng() % 2 ? "Failed\n" : "*** Failed to finish proof\nFinished\n");
    if (rng() % 2) log += "\n\n";
    r.bytes = log;
    return r;
  }

  std::vector<std::string> labels;
  if (r.tool == FakeTool::PRISM) {
    labels = {"probabilistic"};
  } else if (rng() % 2) {
    labels = {rng() % 2 ? "untimed" : "timed"};
  } else {
    labels = rng() % 2 ? std::vector<std::string>{"untimed", "timed"} : std::vector<std::string>{"timed", "untimed"};
  }
  const char* tool = r.tool == FakeTool::PRISM ? "PRISM" : "FDR";
  std::string html = rng() % 2 ? "<!DOCTYPE html>\n<html><head><title>r</title></head><body>\n" : "<html><body>";
  for (const auto& label : labels) {
    const auto title = "Results of " + label + " analysis of assertions in " + r.claim + ".assertions using " + tool;
    const bool caption = rng() % 2 == 0;
    const bool detail = rng() % 2 == 0;
    if (!caption) html += "<h2>" + p() + title + (rng() % 4 == 0 ? "." : "") + p() + "</h2>" + p();
    html += "<table border=\"1\">" + p();
    if (caption) html += "<caption>" + title + "</caption>" + p();
    html += "<tr><th>Assertion</th><th>Result</th>" + std::string(detail ? "<th>Value</th>" : "") + "</tr>" + p();
    const std::size_t rows = 1 + rng() % (r.tool == FakeTool::PRISM ? 10 : 6);
    std::vector<bool> verdicts;
    for (std::size_t i = 0; i < rows; ++i) {
      // Biased towards true so that all-true tables are common.
      const bool v = rng() % 8 != 0;
      verdicts.push_back(v);
      html += "<tr>" + p() + "<td>A_" + r.claim + " &amp; row " + std::to_string(i) + "</td><td>" + p() +
              verdict_word(v, rng) + p() + "</td>";
      if (detail) html += "<td>" + std::to_string(rng() % 1000) + " &lt; 1e3</td>";
      html += "</tr>" + p();
      if (rng() % 10 == 0) html += "<!-- <tr><td>ignored</td><td>false</td></tr> -->";
    }
    html += "</table>" + p();
    r.tables.push_back(std::move(verdicts));
  }
  html += "</body></html>\n";
  r.bytes = html;
  return r;
}

bool flatten_and(const FakeReport& report) {
  bool any = false;
  bool all = true;
  for (const auto& t : report.tables) {
    for (bool v : t) {
      any = true;
      all = all && v;
    }
  }
  return any && all;
}

}  // namespace evigen::testing

#include "evigen/config.hpp"

#include <cstdlib>
#include <variant>

#include "evigen/io.hpp"
#include "text.hpp"

namespace evigen {

std::string_view to_string(ConfigErrorKind kind) { return kind == ConfigErrorKind::Syntax ? "ConfigSyntax" : "ConfigSchema"; }

namespace {

using Value = std::variant<std::string, bool, std::vector<std::string>>;

// Reader for the TOML subset the config needs: [table] headers, bare keys,
// basic strings, booleans and arrays of strings, # comments.
class TomlReader {
 public:
  TomlReader(std::string_view src, std::size_t line) : s_(src), line_(line) {}

  Value value() {
    skip_ws();
    if (peek() == '"') return string();
    if (peek() == '[') return array();
    if (s_.substr(pos_).starts_with("true")) return advance(4), true;
    if (s_.substr(pos_).starts_with("false")) return advance(5), false;
    fail("expected a string, boolean or array of strings");
  }

  void finish() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected trailing characters");
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError(ConfigErrorKind::Syntax, "line " + std::to_string(line_) + ": " + why);
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void advance(std::size_t n) { pos_ += n; }
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::string string() {
    advance(1);
    std::string out;
    while (pos_ < s_.size()) {
      const char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= s_.size()) break;
      switch (const char e = s_[pos_++]) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
    fail("unterminated string");
  }

  std::vector<std::string> array() {
    advance(1);
    std::vector<std::string> out;
    while (true) {
      skip_ws();
      if (peek() == ']') {
        advance(1);
        return out;
      }
      if (peek() != '"') fail("arrays may only hold strings");
      out.push_back(string());
      skip_ws();
      if (peek() == ',') {
        advance(1);
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

bool is_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_' && c != '-') return false;
  }
  return true;
}

[[noreturn]] void schema(const std::string& why) { throw ConfigError(ConfigErrorKind::Schema, why); }

}  // namespace

Config parse_config(std::string_view toml) {
  Config config;
  std::string table;
  std::size_t line_no = 0;
  for (auto raw : text::split(toml, "\n")) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) throw ConfigError(ConfigErrorKind::Syntax, where + ": unterminated table header");
      const auto rest = text::trim(line.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') throw ConfigError(ConfigErrorKind::Syntax, where + ": text after table header");
      table = std::string(text::trim(line.substr(1, close - 1)));
      if (table != "backends") schema(where + ": unknown table [" + table + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(ConfigErrorKind::Syntax, where + ": expected key = value");
    const auto key = std::string(text::trim(line.substr(0, eq)));
    if (!is_bare_key(key)) throw ConfigError(ConfigErrorKind::Syntax, where + ": bad key '" + key + "'");
    TomlReader reader(line.substr(eq + 1), line_no);
    const auto value = reader.value();
    reader.finish();

    if (table.empty()) {
      if (key != "semantics_naming") schema(where + ": unknown key '" + key + "'");
      const auto* s = std::get_if<std::string>(&value);
      if (s == nullptr || (*s != "plain" && *s != "robo")) schema(where + ": semantics_naming must be \"plain\" or \"robo\"");
      config.semantics_naming = *s == "robo" ? SemanticsNaming::robo : SemanticsNaming::plain;
    } else {
      const auto tool = tool_from_string(key);
      if (!tool) schema(where + ": unknown backend '" + key + "'");
      const auto* argv = std::get_if<std::vector<std::string>>(&value);
      if (argv == nullptr || argv->empty()) schema(where + ": backend command must be a nonempty array of strings");
      config.backends[*tool] = *argv;
    }
  }
  return config;
}

Config load_config(const std::optional<std::filesystem::path>& explicit_path) {
  std::filesystem::path path;
  if (explicit_path) {
    path = *explicit_path;
  } else if (const char* env = std::getenv("EVIGEN_CONFIG"); env != nullptr && *env != '\0') {
    path = env;
  } else if (std::filesystem::exists("evigen.toml")) {
    path = "evigen.toml";
  } else {
    return {};
  }
  return parse_config(read_file(path));
}

}  // namespace evigen

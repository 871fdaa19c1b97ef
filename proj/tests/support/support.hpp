#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace evigen::testing {

/// Path of a file under tests/fixtures.
std::filesystem::path fixture(std::string_view relative);

std::string slurp(const std::filesystem::path& path);

/// Maximal [A-Za-z0-9_] runs and single punctuation characters; whitespace dropped.
std::vector<std::string> tokens(std::string_view text);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args);

// DOT ------------------------------------------------------------------------

struct DotGraph {
  bool directed = false;
  std::string name;
  std::map<std::string, std::map<std::string, std::string>> nodes;  // id -> attributes
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::map<std::string, std::string>> edge_attrs;
};

/// Recursive-descent checker for the DOT language subset: strict?, graph or
/// digraph, node/edge/attribute statements, `a=b` statements, subgraphs,
/// IDs as identifiers, numerals or quoted strings. Returns false and sets
/// `why` on a syntax error.
bool parse_dot(std::string_view text, DotGraph& graph, std::string& why);

// Reports ---------------------------------------------------------------------

enum class FakeTool { FDR, PRISM, Isabelle };

/// A randomly generated verification report together with the ground truth
/// row verdicts used to build it.
struct FakeReport {
  FakeTool tool = FakeTool::FDR;
  std::string claim;
  std::vector<std::vector<bool>> tables;  // verdicts per table, in order
  std::string bytes;
};

/// Report bytes in one of the accepted surface forms (title in h2 or caption,
/// mixed-case verdict words, optional detail cells, entities, comments).
FakeReport random_report(std::mt19937_64& rng);

/// Brute-force oracle: flatten every row of every table and AND them; an
/// empty flattening is false.
bool flatten_and(const FakeReport& report);

}  // namespace evigen::testing

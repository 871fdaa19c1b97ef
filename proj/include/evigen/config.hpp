#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evigen/assertion.hpp"
#include "evigen/catalog.hpp"
#include "evigen/error.hpp"

namespace evigen {

enum class ConfigErrorKind { Syntax, Schema };
std::string_view to_string(ConfigErrorKind kind);
using ConfigError = Error<ConfigErrorKind>;

/// Contents of `evigen.toml`:
///
///     semantics_naming = "robo"          # or "plain"
///     [backends]
///     FDR = ["refines", "--format", "html", "{file}"]
///     PRISM = ["prism-runner", "{file}"]
///     Isabelle = ["isabelle-run", "{file}"]
///
/// Backend argv templates substitute `{file}` (absolute assertion file),
/// `{claim}` and `{dir}` (manifest directory). The command's stdout is the report.
struct Config {
  std::optional<SemanticsNaming> semantics_naming;
  std::map<Tool, std::vector<std::string>> backends;
};

/// Throws ConfigError.
Config parse_config(std::string_view toml);

/// Explicit path first, then $EVIGEN_CONFIG, then ./evigen.toml if present.
/// Returns the default config when none of these exist.
Config load_config(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace evigen

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "evigen/catalog.hpp"
#include "evigen/error.hpp"
#include "evigen/fq_event.hpp"
#include "evigen/requirement.hpp"

namespace evigen {

enum class GenerationErrorKind { MissingField, MalformedField };
std::string_view to_string(GenerationErrorKind kind);
using GenerationError = Error<GenerationErrorKind>;

enum class Notation { csp_assertion_dsl, prism_assertion_dsl, isar };
std::string_view to_string(Notation notation);

/// How the implementation process of a module is named in spec_impl.
/// `robo` emits RoboTool's `<module>::O__(0)`.
enum class SemanticsNaming { plain, robo };

struct GenOptions {
  std::string module_name;
  SemanticsNaming naming = SemanticsNaming::plain;
};

struct AssertionArtifact {
  std::string claim_id;
  std::string assertion_id;
  Notation notation = Notation::csp_assertion_dsl;
  Tool tool = Tool::FDR;
  AtTemplate template_id = AtTemplate::AtUtg;
  TimeLabel time_label = TimeLabel::both;
  std::string text;
  std::string source_requirement;

  bool operator==(const AssertionArtifact&) const = default;
};

/// Claim ids name assertion and report files: `[A-Za-z0-9_.-]+`, not starting with a dot.
bool is_claim_id(std::string_view id);

/// `A_`, `P_`, `R_`, `T_` prefix or `_deadlock_free` suffix around the claim id.
std::string assertion_id_for(AtTemplate at, std::string_view claim_id);

/// `<op> <expr>` of a prob_target_/reward_target_ body such as `<_0.5` or `> 8`.
struct Bound {
  std::string op;
  std::string expr;
  bool operator==(const Bound&) const = default;
};

/// Throws GenerationError{MalformedField}.
Bound parse_bound(std::string_view body);

struct TemporalOp {
  bool negated = false;
  bool forall = true;  // false: exists
  std::string inline_formula;  // pathFormula_ segment carried in the same clause, if any
};

/// Parses a term_ body: `[not](forall|exists)`, case-insensitive, optionally
/// followed by `pathFormula_<formula>`. Throws GenerationError{MalformedField}.
TemporalOp parse_term_op(std::string_view body);

/// Round, square and curly brackets nest properly.
bool brackets_balanced(std::string_view text);

/// `with constant` section; empty string for no constants.
std::string render_constants(std::span<const ConstantConfig> constants);

AssertionArtifact gen_untimed_global(const FqEvent& guard, const FqEvent& required, std::string_view claim_id,
                                     const GenOptions& options);
AssertionArtifact gen_untimed_local(const FqEvent& scope_guard, const FqEvent& local_guard, const FqEvent& required,
                                    std::string_view claim_id, const GenOptions& options);
AssertionArtifact gen_timed_deadline(const FqEvent& trigger, const FqEvent& target, std::uint64_t deadline,
                                     std::string_view claim_id, const GenOptions& options);

/// kind is one of Reach, DeadlockFdr, Divergence, Termination.
/// Throws GenerationError{MissingField} for Reach without a state.
AssertionArtifact gen_general(Kind kind, std::string_view scope, const std::optional<std::string>& state, Mode mode,
                              TimeLabel time_label, std::string_view claim_id);

AssertionArtifact gen_ddlk_isar(std::string_view scope, std::string_view claim_id);

AssertionArtifact gen_prob(const Bound& target, std::string_view path_formula,
                           std::span<const ConstantConfig> constants, std::string_view claim_id);
AssertionArtifact gen_reward(const FqEvent& reward_event, std::string_view reward_value, const Bound& target,
                             std::string_view path_formula, std::span<const ConstantConfig> constants,
                             std::string_view claim_id);
AssertionArtifact gen_temporal(const TemporalOp& op, std::string_view path_formula,
                               std::span<const ConstantConfig> constants, std::string_view claim_id);

/// Classifies and instantiates one requirement. Throws CatalogError,
/// GenerationError and RequirementError{MalformedEvent}.
AssertionArtifact generate(const StructuredRequirement& r, const GenOptions& options);

std::vector<AssertionArtifact> generate_all(std::span<const StructuredRequirement> reqs, const GenOptions& options);

struct ManifestEntry {
  std::string requirement;
  std::string claim;
  Tool tool = Tool::FDR;
  std::string file;  // relative to the manifest
  std::string assertion_id;
  AtTemplate template_id = AtTemplate::AtUtg;
  TimeLabel time_label = TimeLabel::both;

  bool operator==(const ManifestEntry&) const = default;
};

/// `<claim>.assertions` for FDR/PRISM, `<claim>.thy` for Isabelle.
std::string assertion_file_name(const AssertionArtifact& a);

/// Assertion files grouped per claim, in first-appearance order.
/// Throws GenerationError{MalformedField} if one file would mix tools.
std::vector<std::pair<std::string, std::string>> assertion_files(std::span<const AssertionArtifact> artifacts);

std::vector<ManifestEntry> manifest_of(std::span<const AssertionArtifact> artifacts);

nlohmann::json manifest_to_json(std::span<const ManifestEntry> entries);

/// Throws GenerationError{MalformedField} on schema mismatch.
std::vector<ManifestEntry> manifest_from_json(const nlohmann::json& doc);

inline constexpr std::string_view kManifestName = "assertions.manifest.json";

/// Writes the assertion files and the manifest atomically into `dir`.
std::vector<ManifestEntry> write_assertions(std::span<const AssertionArtifact> artifacts,
                                            const std::filesystem::path& dir);

}  // namespace evigen

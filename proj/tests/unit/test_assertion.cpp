#include <algorithm>
#include <regex>

#include <gtest/gtest.h>

#include "evigen/assertion.hpp"
#include "support.hpp"

namespace evigen {
namespace {

using testing::fixture;
using testing::slurp;
using testing::TempDir;
using testing::tokens;

std::vector<StructuredRequirement> load(const char* name) { return parse_requirements_doc(slurp(fixture(name))); }

std::size_t count(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

const AssertionArtifact& by_claim(const std::vector<AssertionArtifact>& as, std::string_view claim) {
  const auto it = std::find_if(as.begin(), as.end(), [&](const auto& a) { return a.claim_id == claim; });
  if (it == as.end()) throw std::runtime_error("no artifact for " + std::string(claim));
  return *it;
}

// Goldens are the printed listings, token-compared so layout does not matter.

TEST(Golden, ChemicalA1) {
  const auto as = generate_all(load("chemical/requirements.xml"), {"sys", SemanticsNaming::robo});
  const std::string golden = R"(
    untimed csp Spec
    csp-begin
    Spec = CHAOS(Events) [|{| sys::stop.in |}|>
        (RUN({| sys::stop.in |}) /\ sys::flag.out -> Spec)
    csp-end
    untimed csp Spec_impl associated to sys
    csp-begin
    spec_impl = sys::O__(0)
    csp-end
    untimed assertion A_1 :
    Spec_impl refines Spec in the traces model)";
  EXPECT_EQ(tokens(by_claim(as, "1").text), tokens(golden));
}

TEST(Golden, MaintenanceDti) {
  const auto as =
      generate_all(load("maintenance/requirements.xml"), {"Adaptation_Knowledge::Adaptation_Knowledge", SemanticsNaming::robo});
  ASSERT_EQ(as.size(), 4u);
  const std::string dti1 = R"(
    untimed csp Spec csp-begin
    Spec = CHAOS(Events) [| {| Adaptation_Knowledge::Adaptation_Knowledge::get_image.in |} |>
      (RUN({| Adaptation_Knowledge::Adaptation_Knowledge::get_image.in |}) /\
       Adaptation_Knowledge::Adaptation_Knowledge::images.out?x__ -> Spec)
    csp-end
    untimed csp Spec_impl associated to Adaptation_Knowledge::Adaptation_Knowledge csp-begin
    spec_impl = Adaptation_Knowledge::Adaptation_Knowledge::O__(0)
    csp-end
    untimed assertion A_DTI-1 :
    Spec_impl refines Spec in the traces model)";
  EXPECT_EQ(tokens(by_claim(as, "DTI-1").text), tokens(dti1));
  EXPECT_EQ(tokens(by_claim(as, "DTI-2").text),
            tokens("assertion A_DTI-2: Adaptation_Plan::Adaptation_Plan::MakePlan is reachable in "
                   "Adaptation_Plan::Adaptation_Plan."));
  EXPECT_EQ(tokens(by_claim(as, "DTI-3").text),
            tokens("assertion A_DTI-3: Adaptation_Plan::Adaptation_Plan is deadlock-free."));
  EXPECT_EQ(tokens(by_claim(as, "DTI-4").text),
            tokens("assertion A_DTI-4: Adaptation_Plan::Adaptation_Plan is divergence-free."));
}

TEST(Golden, LreLemma) {
  const auto as = generate_all(load("lre/requirements.xml"), {});
  ASSERT_EQ(as.size(), 1u);
  EXPECT_EQ(tokens(as[0].text), tokens(R"(lemma LRE_deadlock_free: "deadlock_free LREMachine"
      apply deadlock_free)"));
  EXPECT_EQ(as[0].tool, Tool::Isabelle);
  EXPECT_EQ(as[0].notation, Notation::isar);
  EXPECT_EQ(assertion_file_name(as[0]), "LRE.thy");
}

TEST(Golden, DeadlineFromTemplate) {
  const auto as = generate_all(load("chemical/requirements.xml"), {"sys", SemanticsNaming::plain});
  const std::string golden = R"(
    timed csp Spec csp-begin
    Timed(OneStep) {
      Spec = timed_priority(
        CHAOS(Events) [| {| sys::obstacle.in |} |> SKIP;
        ((CHAOS(Events) /\ (WAIT(1); STOPU))
        [| {| sys::odometer.in |} |> SKIP); Spec);
    }
    csp-end
    timed csp Spec_impl associated to sys csp-begin
    Timed(OneStep) {
      spec_impl = timed_priority(sys |\ {| sys::obstacle.in, sys::odometer.in, tock |});
    }
    csp-end
    timed assertion A_2 :
    Spec_impl refines Spec in the traces model)";
  EXPECT_EQ(tokens(by_claim(as, "2").text), tokens(golden));
}

TEST(Golden, LocalUntimedHandInstantiated) {
  const auto a = gen_untimed_local(parse_fq_event("m::c::s::enterMode"), parse_fq_event("m::c::s::start.in"),
                                   parse_fq_event("m::c::s::ack.out"), "U1", {"m", SemanticsNaming::plain});
  const std::string golden = R"(
    untimed csp Spec csp-begin
    Spec = CHAOS(Events) [|{| m::c::s::enterMode |}|> LocalBehaviour
    LocalBehaviour = CHAOS(Events) [|{| m::c::s::start.in |}|>
      (RUN({| m::c::s::start.in |}) /\ m::c::s::ack.out -> Spec)
    csp-end
    untimed csp Spec_impl associated to m csp-begin
    spec_impl = m
    csp-end
    untimed assertion A_U1 :
    Spec_impl refines Spec in the traces model)";
  EXPECT_EQ(tokens(a.text), tokens(golden));
  EXPECT_EQ(count(a.text, "LocalBehaviour"), 2u);
  EXPECT_EQ(count(a.text, "m::c::s::enterMode"), 1u);
}

TEST(Structure, UntimedGlobalEventCounts) {
  const auto a = gen_untimed_global(parse_fq_event("sys::stop.in"), parse_fq_event("sys::flag.out"), "1", {"sys"});
  EXPECT_EQ(count(a.text, "sys::stop.in"), 2u);
  EXPECT_EQ(count(a.text, "sys::flag.out"), 1u);
  EXPECT_NE(a.text.find("spec_impl = sys\n"), std::string::npos);
  const auto same = gen_untimed_global(parse_fq_event("e.in"), parse_fq_event("e.in"), "1", {"sys"});
  EXPECT_EQ(count(same.text, "e.in"), 3u);
}

TEST(Structure, DeadlineEdgeCases) {
  const auto a = gen_timed_deadline(parse_fq_event("t.in"), parse_fq_event("g.out"), 0, "d", {"m"});
  EXPECT_NE(a.text.find("WAIT(0)"), std::string::npos);
  EXPECT_GE(count(a.text, "t.in"), 2u);
  EXPECT_GE(count(a.text, "g.out"), 2u);
  EXPECT_EQ(a.time_label, TimeLabel::timed);
}

TEST(Structure, GeneralForms) {
  EXPECT_EQ(tokens(gen_general(Kind::Termination, "m::c", std::nullopt, Mode::never, TimeLabel::both, "T").text),
            tokens("assertion A_T: m::c does not terminate."));
  EXPECT_EQ(tokens(gen_general(Kind::Termination, "m::c", std::nullopt, Mode::always, TimeLabel::timed, "T").text),
            tokens("timed assertion A_T: m::c terminates."));
  EXPECT_EQ(tokens(gen_general(Kind::DeadlockFdr, "m", std::nullopt, Mode::never, TimeLabel::untimed, "D").text),
            tokens("untimed assertion A_D: m is not deadlock-free."));
  try {
    gen_general(Kind::Reach, "m", std::nullopt, Mode::always, TimeLabel::both, "R");
    ADD_FAILURE() << "reach without state accepted";
  } catch (const GenerationError& e) {
    EXPECT_EQ(e.kind(), GenerationErrorKind::MissingField);
  }
  EXPECT_NE(gen_ddlk_isar("Robot_Arm_2", "X").text.find("\"deadlock_free Robot_Arm_2\""), std::string::npos);
}

TEST(Prism, MailProbRewardTemporal) {
  const auto as = generate_all(load("mail/requirements.xml"), {});
  ASSERT_EQ(as.size(), 3u);
  EXPECT_EQ(tokens(as[0].text), tokens(R"(prob property P_SR1_1_1:
      Prob < 0.5 of [Finally (p == x and c == 0)]
      with constant batteryCapacity set to 20, chargeStep set to 4, x from set 1:8)"));
  EXPECT_EQ(tokens(as[1].text), tokens(R"(rewards reward_SR1_1_2 = [move] true : 1 endrewards
      prob property R_SR1_1_2:
      Reward reward_SR1_1_2 > 8 of [Finally (c == 0 and stm_ref1 is in stm_ref1::batteryState)]
      with constant batteryCapacity set to 20, chargeStep set to 4)"));
  EXPECT_EQ(count(as[1].text, "endrewards"), 1u);
  EXPECT_EQ(count(as[1].text, "rewards "), 1u);
  EXPECT_EQ(tokens(as[2].text), tokens(R"(prob property T_SR1_1_3:
      not Forall [Finally stm_ref0 is in stm_ref0::Stuck]
      with constant batteryCapacity set to 20, chargeStep set to 4)"));
}

TEST(Prism, ConstantsSectionShared) {
  const std::vector<ConstantConfig> cs{{"a", ConstantConfig::Binding::single, "1"},
                                       {"b", ConstantConfig::Binding::range_set, "{1,2}"}};
  const auto p = gen_prob({">", "0.1"}, "Finally x", cs, "c").text;
  const auto t = gen_temporal({false, false, ""}, "Finally x", cs, "c").text;
  const auto section = render_constants(cs);
  EXPECT_NE(p.find(section), std::string::npos);
  EXPECT_NE(t.find(section), std::string::npos);
  EXPECT_EQ(gen_prob({">", "0.1"}, "Finally x", {}, "c").text.find("with constant"), std::string::npos);
  EXPECT_EQ(tokens(t), tokens("prob property T_c: Exists [Finally x] with constant a set to 1, b from set {1,2}"));
  EXPECT_NE(gen_reward(parse_fq_event("m::step"), "0", {">=", "0"}, "F done", {}, "z").text.find(": 0"),
            std::string::npos);
}

TEST(Prism, BoundAndTermOperator) {
  EXPECT_EQ(parse_bound("<_0.5"), (Bound{"<", "0.5"}));
  EXPECT_EQ(parse_bound(">= 0.99"), (Bound{">=", "0.99"}));
  EXPECT_EQ(parse_bound("==1"), (Bound{"==", "1"}));
  EXPECT_THROW(parse_bound("~ 1"), GenerationError);
  EXPECT_THROW(parse_bound("<"), GenerationError);
  const auto op = parse_term_op("not Forall");
  EXPECT_TRUE(op.negated);
  EXPECT_TRUE(op.forall);
  const auto ex = parse_term_op("EXISTS pathFormula_[F done]");
  EXPECT_FALSE(ex.negated);
  EXPECT_FALSE(ex.forall);
  EXPECT_EQ(ex.inline_formula, "F done");
  EXPECT_TRUE(parse_term_op("notexists").negated);
  EXPECT_THROW(parse_term_op("always"), GenerationError);
  EXPECT_FALSE(brackets_balanced("([)]"));
  EXPECT_TRUE(brackets_balanced("{[()]}"));
}

TEST(Generate, CountsAndNaming) {
  EXPECT_EQ(generate_all(load("mail/requirements.xml"), {}).size(), 3u);
  EXPECT_EQ(generate_all(load("maintenance/requirements.xml"), {"M"}).size(), 4u);
  EXPECT_EQ(generate_all(load("lre/requirements.xml"), {}).size(), 1u);
  EXPECT_TRUE(generate_all(std::vector<StructuredRequirement>{}, {}).empty());

  const auto as = generate_all(load("coverage/requirements.xml"), {"m"});
  EXPECT_EQ(as.size(), 11u);
  const std::regex placeholder("<[A-Za-z_][A-Za-z0-9_]*>");
  for (const auto& a : as) {
    EXPECT_EQ(count(a.text, a.assertion_id), 1u) << a.assertion_id;
    EXPECT_EQ(a.assertion_id, assertion_id_for(a.template_id, a.claim_id));
    EXPECT_EQ(a.tool, tool_for(a.template_id));
    EXPECT_FALSE(std::regex_search(a.text, placeholder)) << a.text;
    for (auto p : {ClausePrefix::prob_target, ClausePrefix::reward_target, ClausePrefix::reward_event,
                   ClausePrefix::reward_value, ClausePrefix::path_formula, ClausePrefix::term,
                   ClausePrefix::constant}) {
      EXPECT_EQ(a.text.find(prefix_spelling(p)), std::string::npos) << a.text;
    }
  }
  // Determinism.
  EXPECT_EQ(generate_all(load("coverage/requirements.xml"), {"m"}), as);
}

TEST(Manifest, RoundTripAndFiles) {
  const auto as = generate_all(load("coverage/requirements.xml"), {"m"});
  const auto manifest = manifest_of(as);
  EXPECT_EQ(manifest_from_json(manifest_to_json(manifest)), manifest);
  EXPECT_EQ(manifest_from_json(nlohmann::json::parse(manifest_to_json(manifest).dump())), manifest);

  TempDir dir;
  EXPECT_EQ(write_assertions(as, dir.path()), manifest);
  for (const auto& e : manifest) {
    EXPECT_TRUE(std::filesystem::exists(dir / e.file)) << e.file;
    EXPECT_NE(slurp(dir / e.file).find(e.assertion_id), std::string::npos);
  }
  EXPECT_EQ(manifest_from_json(nlohmann::json::parse(slurp(dir / std::string(kManifestName)))), manifest);
}

TEST(Manifest, RejectsBadDocuments) {
  EXPECT_THROW(manifest_from_json(nlohmann::json::array()), GenerationError);
  EXPECT_THROW(manifest_from_json({{"assertions", {{{"claim", "x"}}}}}), GenerationError);
  auto j = manifest_to_json(manifest_of(generate_all(load("lre/requirements.xml"), {})));
  j["assertions"][0]["file"] = "../escape.thy";
  EXPECT_THROW(manifest_from_json(j), GenerationError);
  j["assertions"][0]["file"] = "LRE.thy";
  j["assertions"][0]["tool"] = "Coq";
  EXPECT_THROW(manifest_from_json(j), GenerationError);
}

TEST(Manifest, OneFileCannotMixTools) {
  auto a = gen_ddlk_isar("M", "same");
  auto b = gen_general(Kind::DeadlockFdr, "M", std::nullopt, Mode::always, TimeLabel::both, "same");
  std::vector<AssertionArtifact> same_file{b, b};
  EXPECT_EQ(assertion_files(same_file).size(), 1u);
  b.tool = Tool::PRISM;  // same .assertions file, different tool
  std::vector<AssertionArtifact> mixed{gen_general(Kind::DeadlockFdr, "M", std::nullopt, Mode::always,
                                                   TimeLabel::both, "same"),
                                       b};
  try {
    assertion_files(mixed);
    ADD_FAILURE() << "mixed tools accepted";
  } catch (const GenerationError& e) {
    EXPECT_EQ(e.kind(), GenerationErrorKind::MalformedField);
  }
  EXPECT_EQ(assertion_file_name(a), "same.thy");
}

TEST(ClaimIds, FileSafeOnly) {
  for (const char* ok : {"1", "DTI-1", "SR1_1_1", "a.b"}) EXPECT_TRUE(is_claim_id(ok)) << ok;
  for (const char* bad : {"", ".hidden", "a/b", "a b", "..", "a\\b"}) EXPECT_FALSE(is_claim_id(bad)) << bad;
}

}  // namespace
}  // namespace evigen

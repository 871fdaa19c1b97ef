#include "fuzz.hpp"

#include <array>
#include <functional>
#include <random>
#include <string_view>
#include <vector>

#include "evigen/assertion.hpp"
#include "evigen/assurance_case.hpp"
#include "evigen/catalog.hpp"
#include "evigen/config.hpp"
#include "evigen/fq_event.hpp"
#include "evigen/report.hpp"
#include "evigen/requirement.hpp"
#include "support.hpp"

namespace evigen::testing {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

constexpr std::string_view kEventAlphabet = "abcXYZ019_:.?-+ \t";
constexpr std::string_view kMarkupAlphabet = "<>/=\"'&;![]{}#\n \t:.?-_aZ09";

const std::array<std::string_view, 24> kDictionary{
    "<requirement", "</requirement>", "<clause", "</clause>", "<![CDATA[", "]]>", "&amp;", "&#x0;", "&lt;",
    "<!--", "-->", "<table>", "</table>", "<tr>", "<td>", "</td>", "<h2>", "Results of", "\"", "::", ".in",
    ".out", "?x", "\xff\xfe"};

std::string mutate(std::string s, Rng& rng, std::string_view alphabet, const std::vector<std::string>& corpus) {
  const auto rounds = 1 + pick(rng, 4);
  for (std::size_t k = 0; k < rounds; ++k) {
    const auto at = pick(rng, s.size() + 1);
    switch (pick(rng, 8)) {
      case 0:  // flip
        if (!s.empty()) s[pick(rng, s.size())] ^= static_cast<char>(1u << pick(rng, 8));
        break;
      case 1:
        s.insert(at, 1, alphabet[pick(rng, alphabet.size())]);
        break;
      case 2:
        if (at < s.size()) s.erase(at, 1 + pick(rng, 16));
        break;
      case 3:
        if (at < s.size()) s.insert(at, s.substr(at, 1 + pick(rng, 32)));
        break;
      case 4:
        s.resize(at);
        break;
      case 5:
        s.insert(at, kDictionary[pick(rng, kDictionary.size())]);
        break;
      case 6: {  // splice in a slice of another seed
        const auto& other = corpus[pick(rng, corpus.size())];
        const auto from = pick(rng, other.size() + 1);
        s.insert(at, other.substr(from, pick(rng, 64)));
        break;
      }
      default:
        if (!s.empty()) s[pick(rng, s.size())] = static_cast<char>(rng() & 0xff);
        break;
    }
  }
  return s;
}

std::string random_string(Rng& rng, std::string_view alphabet, std::size_t max_len) {
  std::string s(pick(rng, max_len + 1), ' ');
  for (auto& c : s) c = alphabet[pick(rng, alphabet.size())];
  return s;
}

std::vector<std::string> load(std::initializer_list<const char*> names) {
  std::vector<std::string> out;
  for (const char* n : names) out.push_back(slurp(fixture(n)));
  return out;
}

// Runs `body` on each input; `Declared` is the only exception allowed out.
template <typename Declared>
FuzzStats drive(std::size_t runs, const std::function<std::string(std::size_t)>& input,
                const std::function<bool(const std::string&)>& body) {
  FuzzStats stats;
  for (std::size_t i = 0; i < runs; ++i) {
    const auto text = input(i);
    ++stats.runs;
    auto note = [&](const std::string& what) {
      if (stats.first_problem.empty()) stats.first_problem = what + " on input: " + text;
    };
    try {
      if (body(text)) {
        ++stats.accepted;
      } else {
        ++stats.broken;
        note("round-trip mismatch");
      }
    } catch (const Declared&) {
      ++stats.rejected;
    } catch (const std::exception& e) {
      ++stats.undeclared;
      note(std::string("undeclared exception '") + e.what() + "'");
    } catch (...) {
      ++stats.undeclared;
      note("non-standard exception");
    }
  }
  return stats;
}

}  // namespace

FuzzStats fuzz_fq_events(std::uint64_t seed, std::size_t runs) {
  const std::vector<std::string> corpus{
      "sys::ctrl::Movement::flag.out", "flag", "mod_sys::ext_setPoint.out.0", "mod_sys::ext_pow24Vstatus.in.Power_Off",
      "A::A::images.out?x__",          "a.b.c.d", "x.in.-1.+2",            "::",
      "a::.in",                         "m::c::s::e.out.in"};
  Rng rng(seed);
  return drive<RequirementError>(
      runs,
      [&](std::size_t i) {
        if (i % 3 == 0) return random_string(rng, kEventAlphabet, 40);
        return mutate(corpus[pick(rng, corpus.size())], rng, kEventAlphabet, corpus);
      },
      [](const std::string& text) {
        const auto e = parse_fq_event(text);
        return is_valid(e) && parse_fq_event(render_fq_event(e)) == e;
      });
}

FuzzStats fuzz_requirement_docs(std::uint64_t seed, std::size_t runs) {
  const auto corpus = load({"mail/requirements.xml", "maintenance/requirements.xml", "hvc/requirements.xml",
                            "chemical/requirements.xml", "lre/requirements.xml", "coverage/requirements.xml"});
  Rng rng(seed);
  return drive<RequirementError>(
      runs, [&](std::size_t) { return mutate(corpus[pick(rng, corpus.size())], rng, kMarkupAlphabet, corpus); },
      [](const std::string& text) {
        const auto reqs = parse_requirements_doc(text);
        if (parse_requirements_doc(write_requirements_doc(reqs)) != reqs) return false;
        for (const auto& r : reqs) {
          bool ok = true;
          for (const auto& d : validate_requirement(r)) ok = ok && d.severity != Severity::error;
          if (!ok) continue;
          try {
            generate(r, {"m"});
          } catch (const GenerationError&) {
          } catch (const CatalogError&) {
          }
        }
        return true;
      });
}

FuzzStats fuzz_reports(std::uint64_t seed, std::size_t runs) {
  const auto corpus =
      load({"reports/1.FDR.html", "reports/SR1_1_1.PRISM.html", "reports/SR1_1_2.PRISM.html", "reports/LRE.log"});
  Rng rng(seed);
  return drive<ReportError>(
      runs, [&](std::size_t) { return mutate(corpus[pick(rng, corpus.size())], rng, kMarkupAlphabet, corpus); },
      [](const std::string& text) {
        aggregate(parse_report(text));
        return true;
      });
}

FuzzStats fuzz_cases(std::uint64_t seed, std::size_t runs) {
  const auto corpus = load({"mail/case.ac.json", "maintenance/case.ac.json", "chemical/case.ac.json"});
  Rng rng(seed);
  return drive<CaseError>(
      runs, [&](std::size_t) { return mutate(corpus[pick(rng, corpus.size())], rng, "{}[]\":,\\ ae0-tn", corpus); },
      [](const std::string& text) {
        const auto ac = load_case(text);
        validate_structure(ac);
        export_gsn_dot(ac);
        return load_case(save_case(ac)) == ac;
      });
}

FuzzStats fuzz_configs(std::uint64_t seed, std::size_t runs) {
  const std::vector<std::string> corpus{
      "semantics_naming = \"robo\"\n[backends]\nFDR = [\"refines\", \"{file}\"]\n",
      "# c\n[backends]\nPRISM = [ \"prism\" , \"a\\tb\" ]\nIsabelle = [\"i\"]\n", ""};
  Rng rng(seed);
  return drive<ConfigError>(
      runs, [&](std::size_t) { return mutate(corpus[pick(rng, corpus.size())], rng, "[]=\"#\\\n ,abtnu", corpus); },
      [](const std::string& text) {
        parse_config(text);
        return true;
      });
}

}  // namespace evigen::testing

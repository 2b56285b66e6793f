/* Copyright 2026 The scproof Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// Acceptance run: one PASS/FAIL line per criterion, each with its wall time.
// Everything here is hermetic: committed AST snapshots, canned LLM replies
// and the mock backend. Exit status is the number of failed criteria.
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <regex>

#include "scproof/detectors.hpp"
#include "scproof/error.hpp"
#include "scproof/ingest.hpp"
#include "scproof/ir_builder.hpp"
#include "scproof/llm.hpp"
#include "scproof/pipeline.hpp"
#include "scproof/process.hpp"
#include "scproof/runner.hpp"
#include "scproof/templates.hpp"
#include "scproof/verdict.hpp"
#include "test_env.hpp"

namespace fs = std::filesystem;
using namespace scproof;

namespace {

using Failures = std::vector<std::string>;

void expect(Failures& out, bool ok, const std::string& what) {
  if (!ok) out.push_back(what);
}

std::string annotated_contract(const std::string& kind) {
  return kv::parse_file(testenv::fixture_dir(kind) / "annotations.txt").root.require("contract", kind);
}

fs::path snapshot(const std::string& kind, const std::string& variant) {
  return testenv::fixture_dir(kind) / "ast" / (variant + ".json");
}

// ---------------------------------------------------------------------------
// 1. Detector sites on the three worked examples, silence on safe twins.

Failures stage_one_fidelity() {
  Failures f;
  {
    const auto ir = testenv::load_contract(snapshot("reentrancy", "vulnerable"), "ReentrancySimple");
    const auto ev = detect_reentrancy(ir);
    expect(f, ev.has_value(), "reentrancy: no evidence on ReentrancySimple");
    if (ev) {
      std::vector<std::uint32_t> idx;
      for (const auto& s : ev->sites) idx.push_back(s.statement_index);
      expect(f, idx == std::vector<std::uint32_t>{1, 2}, "reentrancy: site indices are not (1, 2)");
      expect(f, ev->sites.size() == 2 && ev->sites[0].function == "withdraw" && ev->sites[1].function == "withdraw",
             "reentrancy: sites not in withdraw");
      const auto it = ev->gating_facts.find("all_calls_gas_capped");
      expect(f, it != ev->gating_facts.end() && it->second == "true", "reentrancy: all_calls_gas_capped is not true");
    }
  }
  {
    const auto unit = load_ast_snapshot(snapshot("complex_fallback", "vulnerable"));
    const auto irs = build_ir(unit);
    const auto ir = std::find_if(irs.begin(), irs.end(), [](const auto& c) { return c.name == "ComplexFallback"; });
    expect(f, ir != irs.end(), "complex fallback: contract missing");
    const auto ev = ir == irs.end() ? std::nullopt : detect_complex_fallback(*ir);
    expect(f, ev.has_value() && ev->sites.size() == 1, "complex fallback: expected exactly one site");
    if (ev && ev->sites.size() == 1) {
      const auto& loc = ev->sites[0].location;
      const auto slice = unit.raw_source.substr(loc.start, loc.length);
      // The site must be the assignment to _latestDonor itself.
      expect(f, std::regex_search(slice, std::regex(R"(^_latestDonor\s*=)")),
             "complex fallback: site is not the _latestDonor write: " + slice);
      expect(f, ev->sites[0].function == "receive", "complex fallback: site not in receive");
    }
  }
  {
    const auto ir = testenv::load_contract(snapshot("access_control", "vulnerable"), "UnprotectedSelfdestruct");
    const auto ev = detect_access_control(ir);
    expect(f, ev.has_value() && ev->sites.size() == 1 && ev->sites[0].function == "cancelContract",
           "access control: expected one site in cancelContract");
  }
  for (const auto& kind : testenv::fixture_kinds())
    for (const auto& ir : testenv::load_all(snapshot(kind, "safe")))
      expect(f, run_detectors(ir, all_defect_kinds()).empty(), kind + ": safe twin " + ir.name + " has evidence");
  return f;
}

// ---------------------------------------------------------------------------
// 2. Verdict tables: total and unambiguous, anchored rows present.

std::vector<std::map<std::string, OutcomeStatus>> enumerate(const std::vector<std::string>& roles) {
  std::vector<std::map<std::string, OutcomeStatus>> out{{}};
  for (const auto& role : roles) {
    std::vector<std::map<std::string, OutcomeStatus>> next;
    for (const auto& partial : out)
      for (auto s : {OutcomeStatus::Pass, OutcomeStatus::Fail, OutcomeStatus::Error}) {
        auto m = partial;
        m[role] = s;
        next.push_back(std::move(m));
      }
    out = std::move(next);
  }
  return out;
}

std::map<DefectKind, VerdictTable> shipped_tables() {
  std::map<DefectKind, VerdictTable> out;
  for (const auto& entry : fs::directory_iterator(testenv::template_dir()))
    for (const auto& p : testenv::files_with_ext(entry.path(), ".table")) {
      auto t = load_verdict_table(p);
      out.emplace(t.defect_kind, std::move(t));
    }
  return out;
}

Failures verdict_table_fidelity() {
  Failures f;
  const auto tables = shipped_tables();
  expect(f, tables.size() == 5, "expected 5 shipped tables, found " + std::to_string(tables.size()));
  for (const auto& [kind, table] : tables) {
    for (const auto& combo : enumerate(table.roles)) {
      int n = 0;
      for (const auto& row : table.rows) n += row.matches(combo);
      expect(f, n <= 1, table.id + ": combination matches " + std::to_string(n) + " rows");
    }
  }
  auto row_is = [&](DefectKind k, std::map<std::string, OutcomeStatus> combo, VerdictKind v, const std::string& what) {
    const auto it = tables.find(k);
    if (it == tables.end()) return f.push_back(what + ": table missing");
    const auto& row = it->second.lookup(combo);
    expect(f, &row != &it->second.default_row && row.verdict == v && row.confidence == Confidence::High, what);
  };
  using S = OutcomeStatus;
  row_is(DefectKind::Reentrancy, {{"happy-path", S::Pass}, {"exploit-attempt", S::Pass}},
         VerdictKind::ProvenSafeForScenario, "reentrancy pass/pass is not proven_safe_for_scenario/high");
  row_is(DefectKind::Reentrancy, {{"happy-path", S::Pass}, {"exploit-attempt", S::Fail}}, VerdictKind::ProvenVulnerable,
         "reentrancy pass/fail is not proven_vulnerable/high");
  row_is(DefectKind::ComplexFallback, {{"works-with-full-gas", S::Pass}, {"reverts-at-2300", S::Pass}},
         VerdictKind::ProvenVulnerable, "complex fallback pass/pass is not proven_vulnerable/high");
  row_is(DefectKind::AccessControl, {{"unauthorized-call-reverts", S::Fail}}, VerdictKind::ProvenVulnerable,
         "access control fail is not proven_vulnerable/high");
  return f;
}

// ---------------------------------------------------------------------------
// 3. End-to-end replay of the Complex Fallback example.

Failures end_to_end_replay() {
  Failures f;
  const auto work = testenv::scratch_dir("acceptance-replay");
  const auto report = cmd_run({testenv::replay_input()}, testenv::hermetic_config(work, testenv::replay_mock()));
  int flagged = 0;
  for (const auto& fd : report.findings) {
    if (fd.verdict == VerdictKind::Clean) continue;
    ++flagged;
    expect(f,
           fd.defect_kind == DefectKind::ComplexFallback && fd.verdict == VerdictKind::ProvenVulnerable &&
               fd.confidence == Confidence::High,
           "unexpected finding " + std::string(to_string(fd.defect_kind)) + " " + std::string(to_string(fd.verdict)));
  }
  expect(f, flagged == 1, "expected one non-clean finding, got " + std::to_string(flagged));
  expect(f, exit_code(report) == 2, "exit code " + std::to_string(exit_code(report)) + ", expected 2");
  std::ifstream in(testenv::replay_golden());
  if (!in) {
    f.push_back("golden report missing");
  } else {
    const auto golden = nlohmann::json::parse(in);
    const auto got = testenv::masked(report, work);
    if (got != golden) f.push_back("report differs from golden: " + nlohmann::json::diff(golden, got).dump());
  }
  fs::remove_all(work);
  return f;
}

// ---------------------------------------------------------------------------
// 4. Deterministic fill against the published proof listing.

std::string strip_comments(const std::string& src) {
  std::string out;
  for (std::size_t i = 0; i < src.size();) {
    if (src[i] == '"' || src[i] == '\'') {
      const char q = src[i];
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != q) j += src[j] == '\\' ? 2 : 1;
      out.append(src, i, j + 1 - i);
      i = j + 1;
    } else if (src.compare(i, 2, "//") == 0) {
      i = src.find('\n', i);
      if (i == std::string::npos) break;
    } else if (src.compare(i, 2, "/*") == 0) {
      i = src.find("*/", i);
      if (i == std::string::npos) break;
      i += 2;
    } else {
      out += src[i++];
    }
  }
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  static const std::regex tok(R"("(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*'|[A-Za-z_$][A-Za-z0-9_$]*|\d+|\S)");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), tok); it != std::sregex_iterator(); ++it) out.push_back(it->str());
  return out;
}

/// Statements and block delimiters with whitespace collapsed; import and
/// pragma directives are dropped and returned separately.
std::vector<std::string> statements(const std::string& src, std::vector<std::string>* imports) {
  const auto code = strip_comments(src);
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&](char delim) {
    // Token-joined, so spacing inside a statement does not count.
    std::string s;
    for (const auto& t : tokens(cur)) s += (s.empty() ? "" : " ") + t;
    cur.clear();
    if (s.rfind("import ", 0) == 0) {
      if (imports) imports->push_back(s);
      return;
    }
    if (s.rfind("pragma ", 0) == 0) return;
    if (!s.empty()) out.push_back(s);
    if (delim == '{' || delim == '}') out.emplace_back(1, delim);
  };
  for (char c : code) {
    // Import directives may contain braces; they end at the semicolon.
    const bool in_import = text::trim(cur).rfind("import", 0) == 0;
    if (c == ';' || (!in_import && (c == '{' || c == '}'))) flush(c);
    else cur += c;
  }
  flush(' ');
  return out;
}

struct Hunk {
  std::vector<std::string> listing;
  std::vector<std::string> filled;
};

std::vector<Hunk> diff(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<Hunk> hunks;
  Hunk cur;
  auto close = [&] {
    if (!cur.listing.empty() || !cur.filled.empty()) hunks.push_back(std::move(cur));
    cur = {};
  };
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      close();
      ++i, ++j;
    } else if (j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j])) {
      cur.filled.push_back(b[j++]);
    } else {
      cur.listing.push_back(a[i++]);
    }
  }
  close();
  return hunks;
}

bool is_identifier(const std::string& t) { return !t.empty() && (std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_'); }
bool is_string(const std::string& t) { return !t.empty() && (t[0] == '"' || t[0] == '\''); }

/// Which allowed category a hunk falls in, or empty when none does.
/// Renames must stay consistent across hunks (`renames`, listing -> fill)
/// and may not touch the test vocabulary: swapping assertTrue for
/// assertFalse is a change of meaning, not of naming.
std::string classify(const Hunk& h, std::map<std::string, std::string>& renames) {
  static const std::regex sender(
      R"(^(address( payable)? \w+ = (makeAddr|address) \(.*\)|vm \. (deal|prank|startPrank|stopPrank) \(.*\)|hoax \(.*\))$)");
  static const std::regex vocabulary(
      R"(^(vm|assert\w*|require|revert|expect\w*|deal|prank|\w*[Pp]rank|payable|address|call|transfer|send|ether|wei|gas|)"
      R"(value|new|function|public|external|internal|private|view|returns?|bool|u?int\d*|bytes\d*|string|is|contract|)"
      R"(emit|this|msg|sender|setUp|test\w*|true|false)$)");
  auto all_match = [](const std::vector<std::string>& v) {
    return std::all_of(v.begin(), v.end(), [](const auto& s) { return std::regex_match(s, sender); });
  };
  if (all_match(h.listing) && all_match(h.filled)) return "sender-address arrangement";
  if (h.listing.size() != h.filled.size()) return "";
  bool idents = false;
  bool messages = false;
  for (std::size_t k = 0; k < h.listing.size(); ++k) {
    const auto a = tokens(h.listing[k]);
    const auto b = tokens(h.filled[k]);
    if (a.size() != b.size()) return "";
    const bool assertion = std::regex_search(h.listing[k], std::regex(R"(\b(assert\w*|require|expectRevert)\b)"));
    for (std::size_t t = 0; t < a.size(); ++t) {
      if (a[t] == b[t]) continue;
      if (is_identifier(a[t]) && is_identifier(b[t])) {
        if (std::regex_match(a[t], vocabulary) || std::regex_match(b[t], vocabulary)) return "";
        auto [it, fresh] = renames.emplace(a[t], b[t]);
        if (!fresh && it->second != b[t]) return "";
        idents = true;
      } else if (is_string(a[t]) && is_string(b[t]) && assertion) {
        messages = true;
      } else {
        return "";
      }
    }
  }
  if (idents && messages) return "identifier names and assertion messages";
  return idents ? "identifier names" : messages ? "assertion messages" : "";
}

struct StructuralDiff {
  std::map<std::string, int> categories;
  std::vector<std::string> unclassified;
};

StructuralDiff structural_diff(const std::string& listing, const std::string& filled) {
  StructuralDiff out;
  std::vector<std::string> listing_imports;
  std::vector<std::string> filled_imports;
  const auto hunks = diff(statements(listing, &listing_imports), statements(filled, &filled_imports));
  if (listing_imports != filled_imports) ++out.categories["import paths"];
  std::map<std::string, std::string> renames;
  for (const auto& h : hunks) {
    const auto c = classify(h, renames);
    if (!c.empty()) {
      ++out.categories[c];
      continue;
    }
    std::string text = "listing {";
    for (const auto& st : h.listing) text += " " + st + ";";
    text += " } fill {";
    for (const auto& st : h.filled) text += " " + st + ";";
    out.unclassified.push_back(text + " }");
  }
  return out;
}

std::set<std::string> test_methods(const std::string& src) {
  static const std::regex fn(R"(\bfunction\s+(test\w*)\s*\()");
  std::set<std::string> out;
  for (auto it = std::sregex_iterator(src.begin(), src.end(), fn); it != std::sregex_iterator(); ++it)
    out.insert((*it)[1].str());
  return out;
}

Failures deterministic_fill(std::string& detail) {
  Failures f;
  const auto registry = TemplateRegistry::load(testenv::template_dir());
  const auto* tmpl = registry.find(DefectKind::ComplexFallback);
  if (!tmpl) return {"no ComplexFallback template"};
  const auto ir = testenv::load_contract(snapshot("complex_fallback", "vulnerable"), "ComplexFallback");
  const auto ev = detect_complex_fallback(ir);
  if (!ev) return {"no evidence to fill against"};
  const auto spec = make_suite_spec(*tmpl, ir, *ev);
  const auto filled = fill_deterministic(*tmpl, spec);
  expect(f, !tmpl->has_llm_slots(), "template has LLM slots; an offline fill would not be deterministic");

  const auto work = testenv::scratch_dir("acceptance-fill");
  ValidationOptions structural;
  structural.compile = false;
  const auto v = validate_suite(filled, work, *tmpl, spec, structural);
  fs::remove_all(work);
  expect(f, v.compiled_ok && !v.compile_checked, "structural validation failed: " +
                                                      (v.diagnostics.empty() ? std::string("?") : v.diagnostics.front()));

  const auto listing = text::read_file(testenv::data_dir() / "listings" / "complex_fallback_proof.sol");
  const auto expected = test_methods(listing);
  expect(f, expected.size() == 2, "listing should declare two test methods");
  expect(f, test_methods(filled) == expected, "test method names differ from the listing");
  std::set<std::string> declared;
  for (const auto& m : tmpl->expected_test_methods) declared.insert(m.name);
  expect(f, declared == expected, "manifest method names differ from the listing");

  const auto d = structural_diff(listing, filled);
  for (const auto& u : d.unclassified) f.push_back("unclassified difference: " + u);

  // The classifier itself has to reject changes of meaning.
  const std::vector<std::pair<std::string, std::string>> mutations = {
      {"vm.assertTrue(success", "vm.assertFalse(success"},
      {"transfer(1 ether)", "transfer(2 ether)"},
      {"vm.expectRevert();", ""},
  };
  for (const auto& [from, to] : mutations) {
    const auto at = filled.find(from);
    if (at == std::string::npos) {
      f.push_back("negative control not applicable: " + from);
      continue;
    }
    auto mutated = filled;
    mutated.replace(at, from.size(), to);
    expect(f, !structural_diff(listing, mutated).unclassified.empty(), "classifier accepted mutation " + from + " -> " + to);
  }
  const auto& categories = d.categories;
  for (const auto& [c, n] : categories) detail += (detail.empty() ? "" : ", ") + c + " x" + std::to_string(n);
  return f;
}

// ---------------------------------------------------------------------------
// 5. Backend log parsers against hand labels.

Failures parser_goldens(std::string& detail) {
  Failures f;
  const auto goldens = testenv::data_dir() / "goldens";
  int forge = 0, kontrol = 0, normalized = 0;
  for (const auto& p : testenv::files_with_ext(goldens / "forge", ".json")) {
    auto labels = p;
    labels.replace_extension(".labels");
    const auto got = testenv::statuses(parse_forge_json(text::read_file(p)));
    expect(f, got == testenv::statuses(testenv::read_labels(labels)), "forge golden " + p.filename().string());
    ++forge;
  }
  LlmConfig cfg;
  cfg.mode = LlmMode::OfflineStub;
  cfg.stub_dir = goldens / "kontrol" / "stubs";
  LlmClient client(cfg);
  for (const auto& p : testenv::files_with_ext(goldens / "kontrol", ".log")) {
    auto labels = p;
    labels.replace_extension(".labels");
    const auto raw = text::read_file(p);
    const auto regex = testenv::statuses(parse_kontrol_log(raw));
    expect(f, regex == testenv::statuses(testenv::read_labels(labels)), "kontrol golden " + p.filename().string());
    ++kontrol;
    if (regex.empty()) continue;
    expect(f, normalize_runner_output(client, raw, p.stem().string()) == regex,
           "normalizer disagrees with regex on " + p.filename().string());
    ++normalized;
  }
  expect(f, forge > 0 && kontrol > 0 && normalized > 0, "golden corpus is empty");
  detail = std::to_string(forge) + " forge, " + std::to_string(kontrol) + " kontrol, " + std::to_string(normalized) +
           " normalizer comparisons";
  return f;
}

// ---------------------------------------------------------------------------
// 6. Property suites.

Failures properties(std::string& detail) {
  Failures f;
  int checked = 0;
  int compiled = 0;

  // IR: rebuilding is deterministic, and a standard-JSON round trip of the
  // snapshot (and, where a compiler is available, a fresh compile) gives
  // the same IR.
  for (const auto& kind : testenv::fixture_kinds()) {
    for (const std::string variant : {"vulnerable", "safe"}) {
      const auto unit = load_ast_snapshot(snapshot(kind, variant));
      const auto a = build_ir(unit);
      const auto b = build_ir(unit);
      const auto c = build_ir(source_unit_from_standard_json(unit.standard_json, unit.raw_source, unit.path));
      bool same = a.size() == b.size() && a.size() == c.size();
      for (std::size_t i = 0; same && i < a.size(); ++i)
        same = canonical(a[i]) == canonical(b[i]) && canonical(a[i]) == canonical(c[i]);
      expect(f, same, "IR not deterministic for " + kind + "/" + variant);
      ++checked;
      if (testenv::have_solc() && variant == "vulnerable") {
        CompileOptions co;
        co.solc_path = testenv::solc_path();
        const auto fresh = build_ir(compile_to_ast(testenv::fixture_dir(kind) / (variant + ".sol"), co));
        bool eq = fresh.size() == a.size();
        for (std::size_t i = 0; eq && i < a.size(); ++i) {
          auto x = to_json(fresh[i]);
          auto y = to_json(a[i]);
          eq = x == y;
        }
        expect(f, eq, "fresh compile IR differs from snapshot for " + kind);
        ++compiled;
      }
    }
  }

  // Templates: filling is idempotent and keeps every anchor line.
  const auto registry = TemplateRegistry::load(testenv::template_dir());
  for (const auto& tmpl : registry.all()) {
    const auto kind = dir_name(tmpl.defect_kind);
    const auto ir = testenv::load_contract(snapshot(std::string(kind), "vulnerable"), annotated_contract(std::string(kind)));
    const auto ev = run_detectors(ir, {tmpl.defect_kind});
    if (ev.empty()) {
      f.push_back(tmpl.template_id + ": fixture has no evidence");
      continue;
    }
    const auto spec = make_suite_spec(tmpl, ir, ev.front());
    const auto once = fill_deterministic(tmpl, spec);
    expect(f, once == fill_deterministic(tmpl, spec), tmpl.template_id + ": fill not idempotent");
    std::set<std::string> lines;
    for (const auto& l : text::split_lines(once)) lines.insert(std::string(text::trim(l)));
    for (const auto& slot : tmpl.slots)
      expect(f, lines.contains(std::string(text::trim(slot.anchor))), tmpl.template_id + ": anchor lost for " + slot.name);
  }

  // Reports: JSON round trip and byte-identical rendering after reordering.
  {
    const auto work = testenv::scratch_dir("acceptance-report");
    std::vector<fs::path> inputs;
    for (const auto& kind : testenv::fixture_kinds()) inputs.push_back(snapshot(kind, "vulnerable"));
    auto report = cmd_run(inputs, testenv::hermetic_config(work, testenv::data_dir() / "mock" / "corpus_vulnerable.mock"));
    fs::remove_all(work);
    const auto bytes = render_json(report);
    const auto back = report_from_json(nlohmann::json::parse(bytes));
    expect(f, render_json(back) == bytes, "report JSON round trip changed bytes");
    std::mt19937 rng(2026);
    for (int i = 0; i < 10; ++i) {
      auto shuffled = report;
      std::shuffle(shuffled.findings.begin(), shuffled.findings.end(), rng);
      std::shuffle(shuffled.artifacts.begin(), shuffled.artifacts.end(), rng);
      std::shuffle(shuffled.inputs.begin(), shuffled.inputs.end(), rng);
      normalize(shuffled);
      expect(f, render_json(shuffled) == bytes, "normalized report bytes depend on input order");
    }
  }

  // Degrade path: generation <= execution <= any non-error table verdict.
  const auto tables = shipped_tables();
  for (auto kind : kAllDefectKinds) {
    for (const bool custom : {true, false}) {
      DefectEvidence ev;
      ev.kind = kind;
      ev.contract = "C";
      ev.sites.push_back({"f", 0, {}, "t", ""});
      ev.gating_facts["has_custom_access_modifiers"] = custom ? "true" : "false";
      const auto gen = degrade(ev, FailedStage::Generation, "g").confidence;
      const auto exec = degrade(ev, FailedStage::Execution, "e").confidence;
      expect(f, gen <= exec, std::string(to_string(kind)) + ": generation failure outranks execution failure");
      if (auto it = tables.find(kind); it != tables.end())
        for (const auto& combo : enumerate(it->second.roles)) {
          const auto& row = it->second.lookup(combo);
          if (row.verdict != VerdictKind::Error)
            expect(f, exec <= row.confidence, it->second.id + ": degraded confidence above a completed verdict");
        }
    }
  }

  // Offline mode: the replay under a seccomp filter that kills on socket,
  // connect, execve and execveat.
  ProcessSpec probe;
  probe.executable = SCPROOF_HERMETIC_PROBE;
  probe.working_dir = testenv::source_dir();
  probe.timeout = std::chrono::seconds(60);
  const auto run = run_process(probe);
  expect(f, run.exit_status == 0 && run.out.find("hermetic: ok") != std::string::npos,
         "hermetic probe failed: " + std::string(text::trim(run.out)));

  detail = std::to_string(checked) + " IR snapshots, " +
           (testenv::have_solc() ? std::to_string(compiled) + " fresh compiles" : std::string("no compiler, fresh compiles skipped")) +
           ", " + std::to_string(registry.all().size()) + " templates, hermetic probe";
  return f;
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 = no bound
  std::function<Failures(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "stage-1 fidelity on worked examples", 5.0, [](std::string&) { return stage_one_fidelity(); }},
      {2, "verdict-table fidelity", 1.0, [](std::string&) { return verdict_table_fidelity(); }},
      {3, "complex fallback end-to-end replay", 5.0, [](std::string&) { return end_to_end_replay(); }},
      {4, "deterministic fill vs proof listing", 1.0, deterministic_fill},
      {5, "parser goldens", 0.0, parser_goldens},
      {6, "property suites", 0.0, properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    Failures fails;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fails = c.run(detail);
    } catch (const std::exception& e) {
      fails.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds)
      fails.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_seconds) + " s");
    failed += !fails.empty();
    std::cout << "AC" << c.id << " " << (fails.empty() ? "PASS" : "FAIL") << " " << c.name << " (" << std::fixed
              << std::setprecision(2) << secs << " s)";
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "\n";
    for (const auto& why : fails) std::cout << "    " << why << "\n";
  }
  return failed;
}

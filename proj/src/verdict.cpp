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
#include "scproof/verdict.hpp"

#include <algorithm>
#include <set>

#include "scproof/error.hpp"
#include "scproof/kv.hpp"
#include "scproof/text.hpp"

namespace scproof {

namespace {

constexpr OutcomeStatus kStatuses[] = {OutcomeStatus::Pass, OutcomeStatus::Fail, OutcomeStatus::Error};

VerdictRow parse_row(const kv::Section& section, const std::vector<std::string>& roles, const std::string& origin,
                     bool is_default) {
  auto invalid = [&](const std::string& why) { return Error(ErrorCode::TableInvalid, origin + ": " + why); };
  VerdictRow row;
  const std::set<std::string> known(roles.begin(), roles.end());
  for (const auto& [key, value] : section.entries) {
    if (key == "verdict") {
      auto v = parse_verdict_kind(value);
      if (!v) throw invalid("unknown verdict '" + value + "'");
      row.verdict = *v;
    } else if (key == "confidence") {
      auto c = parse_confidence(value);
      if (!c) throw invalid("unknown confidence '" + value + "'");
      row.confidence = *c;
    } else if (key == "note") {
      row.note = value;
    } else if (is_default) {
      throw invalid("default row cannot name role '" + key + "'");
    } else {
      if (!known.contains(key)) throw invalid("row names unknown role '" + key + "'");
      if (value != "*" && !parse_outcome_status(value)) throw invalid("unknown status '" + value + "'");
      row.pattern[key] = value;
    }
  }
  if (!section.has("verdict") || !section.has("confidence")) throw invalid("row needs verdict and confidence");
  return row;
}

}  // namespace

std::string_view to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::ProvenVulnerable: return "proven_vulnerable";
    case VerdictKind::ProvenSafeForScenario: return "proven_safe_for_scenario";
    case VerdictKind::Suspected: return "suspected";
    case VerdictKind::Clean: return "clean";
    case VerdictKind::Error: return "error";
  }
  return "error";
}

std::optional<VerdictKind> parse_verdict_kind(std::string_view text) {
  for (auto v : {VerdictKind::ProvenVulnerable, VerdictKind::ProvenSafeForScenario, VerdictKind::Suspected,
                 VerdictKind::Clean, VerdictKind::Error})
    if (to_string(v) == text) return v;
  return std::nullopt;
}

std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::None: return "none";
    case Confidence::Low: return "low";
    case Confidence::Medium: return "medium";
    case Confidence::High: return "high";
  }
  return "none";
}

std::optional<Confidence> parse_confidence(std::string_view text) {
  for (auto c : {Confidence::None, Confidence::Low, Confidence::Medium, Confidence::High})
    if (to_string(c) == text) return c;
  return std::nullopt;
}

std::string_view to_string(FailedStage s) { return s == FailedStage::Generation ? "generation" : "execution"; }

bool VerdictRow::matches(const std::map<std::string, OutcomeStatus>& statuses) const {
  for (const auto& [role, want] : pattern) {
    if (want == "*") continue;
    auto it = statuses.find(role);
    if (it == statuses.end() || to_string(it->second) != want) return false;
  }
  return true;
}

const VerdictRow& VerdictTable::lookup(const std::map<std::string, OutcomeStatus>& statuses) const {
  for (const auto& row : rows)
    if (row.matches(statuses)) return row;
  return default_row;
}

std::vector<std::map<std::string, OutcomeStatus>> all_status_combinations(const std::vector<std::string>& roles) {
  std::vector<std::map<std::string, OutcomeStatus>> out{{}};
  for (const auto& role : roles) {
    std::vector<std::map<std::string, OutcomeStatus>> next;
    for (const auto& partial : out) {
      for (auto s : kStatuses) {
        auto extended = partial;
        extended[role] = s;
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

VerdictTable parse_verdict_table(std::string_view text, std::string_view origin_view) {
  const std::string origin(origin_view);
  kv::Document doc;
  try {
    doc = kv::parse(text, origin);
  } catch (const Error& e) {
    throw Error(ErrorCode::TableInvalid, e.detail());
  }
  auto invalid = [&](const std::string& why) { return Error(ErrorCode::TableInvalid, origin + ": " + why); };
  VerdictTable t;
  t.id = doc.root.get_or("id", "");
  if (t.id.empty()) throw invalid("missing id");
  auto kind = parse_defect_kind(doc.root.get_or("defect_kind", ""));
  if (!kind) throw invalid("missing or unknown defect_kind");
  t.defect_kind = *kind;
  t.roles = kv::split_list(doc.root.get_or("roles", ""));
  if (t.roles.empty()) throw invalid("no roles");
  if (std::set<std::string>(t.roles.begin(), t.roles.end()).size() != t.roles.size()) throw invalid("duplicate role");
  for (const auto* row : doc.groups("row")) t.rows.push_back(parse_row(*row, t.roles, origin, false));
  const auto* def = doc.table("default");
  if (!def) throw invalid("missing [default]");
  t.default_row = parse_row(*def, t.roles, origin, true);

  // Rows must be mutually exclusive; the default row makes them exhaustive.
  for (const auto& combo : all_status_combinations(t.roles)) {
    const auto hits = std::count_if(t.rows.begin(), t.rows.end(), [&](const VerdictRow& r) { return r.matches(combo); });
    if (hits > 1) throw invalid("rows overlap");
  }
  return t;
}

VerdictTable load_verdict_table(const std::filesystem::path& path) {
  std::string content;
  try {
    content = text::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::TableInvalid, e.detail());
  }
  return parse_verdict_table(content, path.generic_string());
}

std::vector<TestRecord> test_records(const ExecutionResult& result, const std::map<std::string, std::string>& roles) {
  std::vector<TestRecord> out;
  for (const auto& [method, outcome] : result.per_test) {
    auto role = roles.find(method);
    out.push_back(TestRecord{method, role == roles.end() ? "" : role->second, result.backend, outcome.status,
                             outcome.detail});
  }
  return out;
}

Interpretation interpret(const VerdictTable& table, const ExecutionResult& result,
                         const std::map<std::string, std::string>& roles) {
  auto from_row = [](const VerdictRow& row) { return Interpretation{row.verdict, row.confidence, row.note}; };

  std::vector<std::string> mismatched(result.unexpected_methods.begin(), result.unexpected_methods.end());
  for (const auto& [method, outcome] : result.per_test)
    if (!roles.contains(method)) mismatched.push_back(method);
  std::map<std::string, OutcomeStatus> statuses;
  for (const auto& [method, role] : roles) {
    auto it = result.per_test.find(method);
    statuses[role] = it == result.per_test.end() ? OutcomeStatus::Error : it->second.status;
  }
  std::vector<std::string> unfilled;
  for (const auto& role : table.roles)
    if (!statuses.contains(role)) unfilled.push_back(role);

  if (!mismatched.empty() || !unfilled.empty()) {
    auto out = from_row(table.default_row);
    std::string note = std::string(to_string(ErrorCode::RoleMismatch)) + ":";
    for (const auto& m : mismatched) note += " unexpected method " + m + ";";
    for (const auto& r : unfilled) note += " no method for role " + r + ";";
    note.pop_back();
    out.note = note;
    return out;
  }
  const auto& row = table.lookup(statuses);
  auto out = from_row(row);
  if (&row == &table.default_row) {
    // Carry the backend's reason for the first test that did not finish.
    for (const auto& [method, outcome] : result.per_test) {
      if (outcome.status == OutcomeStatus::Error) {
        out.note = method + ": " + (outcome.detail.empty() ? "error" : outcome.detail);
        break;
      }
    }
    if (out.note.empty() && result.run_failed()) out.note = result.failure;
  }
  return out;
}

Finding degrade(const DefectEvidence& evidence, FailedStage stage, const std::string& reason) {
  Finding f;
  f.contract = evidence.contract;
  f.defect_kind = evidence.kind;
  f.verdict = VerdictKind::Suspected;
  f.confidence = stage == FailedStage::Execution ? Confidence::Medium : Confidence::Low;
  if (evidence.kind == DefectKind::AccessControl) {
    auto it = evidence.gating_facts.find("has_custom_access_modifiers");
    if (it == evidence.gating_facts.end() || it->second != "true") f.confidence = Confidence::Low;
  }
  f.evidence = evidence;
  f.degraded_stage = stage;
  f.notes.push_back(std::string(to_string(stage)) + " failed: " + reason);
  return f;
}

std::vector<Finding> finalize(const std::string& file, const std::string& contract,
                              const std::vector<DefectKind>& enabled, const std::vector<DefectEvidence>& evidence,
                              const std::map<DefectKind, KindOutcome>& outcomes) {
  std::vector<DefectKind> kinds = enabled;
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

  std::vector<Finding> out;
  for (auto kind : kinds) {
    auto ev = std::find_if(evidence.begin(), evidence.end(), [&](const DefectEvidence& e) { return e.kind == kind; });
    Finding f;
    if (ev == evidence.end()) {
      f.defect_kind = kind;
      f.verdict = VerdictKind::Clean;
      f.confidence = Confidence::High;
    } else {
      auto oc = outcomes.find(kind);
      if (oc == outcomes.end() || oc->second.kind == KindOutcome::Kind::NotTested) {
        f.defect_kind = kind;
        f.verdict = VerdictKind::Suspected;
        f.confidence = Confidence::Medium;
        f.evidence = *ev;
        if (oc != outcomes.end()) f.notes = oc->second.notes;
      } else if (oc->second.kind == KindOutcome::Kind::Degraded) {
        f = degrade(*ev, oc->second.failed_stage, oc->second.reason);
        f.notes.insert(f.notes.end(), oc->second.notes.begin(), oc->second.notes.end());
      } else {
        const auto& in = oc->second.interpretation;
        f.defect_kind = kind;
        f.verdict = in.verdict;
        f.confidence = in.confidence;
        f.notes = oc->second.notes;
        if (!in.note.empty()) f.notes.push_back(in.note);
        if (in.verdict != VerdictKind::Clean) {
          f.evidence = *ev;
          f.tests = oc->second.tests;
        }
      }
    }
    f.file = file;
    f.contract = contract;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace scproof

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
#include "scproof/report.hpp"

#include <algorithm>
#include <tuple>

#include "scproof/error.hpp"

using nlohmann::json;

namespace scproof {

namespace {

const json& need(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::JsonMalformed, path + "/" + key);
  return *it;
}

std::string need_string(const json& j, const char* key, const std::string& path) {
  const auto& v = need(j, key, path);
  if (!v.is_string()) throw Error(ErrorCode::JsonMalformed, path + "/" + key);
  return v.get<std::string>();
}

const json& need_array(const json& j, const char* key, const std::string& path) {
  const auto& v = need(j, key, path);
  if (!v.is_array()) throw Error(ErrorCode::JsonMalformed, path + "/" + key);
  return v;
}

template <typename T, typename Parse>
T parse_enum(const json& j, const char* key, const std::string& path, Parse parse) {
  auto v = parse(need_string(j, key, path));
  if (!v) throw Error(ErrorCode::JsonMalformed, path + "/" + key);
  return *v;
}

std::string_view symbol(VerdictKind v) {
  switch (v) {
    case VerdictKind::ProvenVulnerable: return "!";
    case VerdictKind::Suspected: return "?";
    case VerdictKind::ProvenSafeForScenario: return "+";
    case VerdictKind::Error: return "x";
    case VerdictKind::Clean: return " ";
  }
  return " ";
}

}  // namespace

bool operator==(const Finding& a, const Finding& b) { return to_json(a) == to_json(b); }

bool operator==(const ScanReport& a, const ScanReport& b) { return to_json(a) == to_json(b); }

void normalize(ScanReport& report) {
  std::stable_sort(report.findings.begin(), report.findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.file, a.contract, a.defect_kind) < std::tie(b.file, b.contract, b.defect_kind);
  });
  auto by_ref = [](const InputRef& a, const InputRef& b) { return std::tie(a.file, a.contract) < std::tie(b.file, b.contract); };
  std::stable_sort(report.inputs.begin(), report.inputs.end(), by_ref);
  std::stable_sort(report.artifacts.begin(), report.artifacts.end(), [](const Artifact& a, const Artifact& b) {
    return std::tie(a.contract, a.defect_kind, a.kind, a.path) < std::tie(b.contract, b.defect_kind, b.kind, b.path);
  });
  std::stable_sort(report.input_errors.begin(), report.input_errors.end(),
                   [](const InputError& a, const InputError& b) { return a.file < b.file; });
}

json to_json(const Finding& f) {
  json j = {
      {"file", f.file},
      {"contract", f.contract},
      {"defect_kind", std::string(to_string(f.defect_kind))},
      {"verdict", std::string(to_string(f.verdict))},
      {"confidence", std::string(to_string(f.confidence))},
      {"notes", f.notes},
  };
  if (f.evidence) j["evidence"] = to_json(*f.evidence);
  json tests = json::array();
  for (const auto& t : f.tests) {
    tests.push_back({{"method", t.method},
                     {"role", t.role},
                     {"backend", std::string(to_string(t.backend))},
                     {"status", std::string(to_string(t.status))},
                     {"detail", t.detail}});
  }
  j["tests"] = std::move(tests);
  if (f.degraded_stage) j["degraded_stage"] = std::string(to_string(*f.degraded_stage));
  return j;
}

Finding finding_from_json(const json& j) {
  const std::string path = "/finding";
  if (!j.is_object()) throw Error(ErrorCode::JsonMalformed, path);
  Finding f;
  f.file = need_string(j, "file", path);
  f.contract = need_string(j, "contract", path);
  f.defect_kind = parse_enum<DefectKind>(j, "defect_kind", path, parse_defect_kind);
  f.verdict = parse_enum<VerdictKind>(j, "verdict", path, parse_verdict_kind);
  f.confidence = parse_enum<Confidence>(j, "confidence", path, parse_confidence);
  for (const auto& n : need_array(j, "notes", path)) {
    if (!n.is_string()) throw Error(ErrorCode::JsonMalformed, path + "/notes");
    f.notes.push_back(n.get<std::string>());
  }
  if (auto ev = j.find("evidence"); ev != j.end()) f.evidence = evidence_from_json(*ev);
  for (const auto& t : need_array(j, "tests", path)) {
    const std::string tp = path + "/tests";
    TestRecord r;
    r.method = need_string(t, "method", tp);
    r.role = need_string(t, "role", tp);
    r.backend = parse_enum<BackendKind>(t, "backend", tp, parse_backend_kind);
    r.status = parse_enum<OutcomeStatus>(t, "status", tp, parse_outcome_status);
    r.detail = need_string(t, "detail", tp);
    f.tests.push_back(std::move(r));
  }
  if (auto d = j.find("degraded_stage"); d != j.end()) {
    if (*d == "generation") f.degraded_stage = FailedStage::Generation;
    else if (*d == "execution") f.degraded_stage = FailedStage::Execution;
    else throw Error(ErrorCode::JsonMalformed, path + "/degraded_stage");
  }
  return f;
}

json to_json(const ScanReport& r) {
  json inputs = json::array();
  for (const auto& i : r.inputs) inputs.push_back({{"file", i.file}, {"contract", i.contract}});
  json findings = json::array();
  for (const auto& f : r.findings) findings.push_back(to_json(f));
  json artifacts = json::array();
  for (const auto& a : r.artifacts)
    artifacts.push_back({{"contract", a.contract}, {"defect_kind", a.defect_kind}, {"kind", a.kind}, {"path", a.path}});
  json errors = json::array();
  for (const auto& e : r.input_errors) errors.push_back({{"file", e.file}, {"error", e.error}});
  return {
      {"schema_version", r.schema_version},
      {"tool_version", r.tool_version},
      {"started_at", r.started_at},
      {"finished_at", r.finished_at},
      {"inputs", std::move(inputs)},
      {"config_digest", r.config_digest},
      {"findings", std::move(findings)},
      {"artifacts", std::move(artifacts)},
      {"input_errors", std::move(errors)},
  };
}

ScanReport report_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::JsonMalformed, "/");
  ScanReport r;
  r.schema_version = need_string(j, "schema_version", "");
  if (r.schema_version != "1") throw Error(ErrorCode::JsonMalformed, "/schema_version");
  r.tool_version = need_string(j, "tool_version", "");
  r.started_at = need_string(j, "started_at", "");
  r.finished_at = need_string(j, "finished_at", "");
  r.config_digest = need_string(j, "config_digest", "");
  for (const auto& i : need_array(j, "inputs", ""))
    r.inputs.push_back({need_string(i, "file", "/inputs"), need_string(i, "contract", "/inputs")});
  for (const auto& f : need_array(j, "findings", "")) r.findings.push_back(finding_from_json(f));
  for (const auto& a : need_array(j, "artifacts", "")) {
    r.artifacts.push_back({need_string(a, "contract", "/artifacts"), need_string(a, "defect_kind", "/artifacts"),
                           need_string(a, "kind", "/artifacts"), need_string(a, "path", "/artifacts")});
  }
  for (const auto& e : need_array(j, "input_errors", ""))
    r.input_errors.push_back({need_string(e, "file", "/input_errors"), need_string(e, "error", "/input_errors")});
  return r;
}

std::string render_json(const ScanReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_text(const ScanReport& report, int verbosity) {
  std::string out;
  std::size_t shown = 0;
  std::map<VerdictKind, int> counts;
  for (const auto& f : report.findings) {
    if (f.verdict == VerdictKind::Clean) continue;
    ++shown;
    ++counts[f.verdict];
    out += std::string(symbol(f.verdict)) + " " + f.contract + " " + std::string(to_string(f.defect_kind)) + ": " +
           std::string(to_string(f.verdict)) + " (" + std::string(to_string(f.confidence)) + ")";
    if (f.degraded_stage) out += " \xE2\x80\x94 suspected \xE2\x80\x94 " + std::string(to_string(*f.degraded_stage)) + " failed";
    out += "\n";
    if (verbosity >= 1) {
      if (f.evidence) {
        for (const auto& s : f.evidence->sites) {
          out += "    at " + s.function + "#" + std::to_string(s.statement_index) + " line " +
                 std::to_string(s.location.line) + ": " + s.tag;
          if (!s.detail.empty()) out += " (" + s.detail + ")";
          out += "\n";
        }
      }
      for (const auto& n : f.notes) out += "    note: " + n + "\n";
    }
    if (verbosity >= 2) {
      for (const auto& t : f.tests) {
        out += "    test " + t.method + " [" + t.role + "] " + std::string(to_string(t.backend)) + ": " +
               std::string(to_string(t.status));
        if (!t.detail.empty()) out += " (" + t.detail + ")";
        out += "\n";
      }
    }
  }
  for (const auto& e : report.input_errors) out += "x " + e.file + ": " + e.error + "\n";
  if (shown == 0 && report.input_errors.empty()) {
    out += "no findings (" + std::to_string(report.inputs.size()) + " contracts scanned)\n";
  } else {
    out += std::to_string(shown) + " findings: " + std::to_string(counts[VerdictKind::ProvenVulnerable]) +
           " vulnerable, " + std::to_string(counts[VerdictKind::Suspected]) + " suspected, " +
           std::to_string(counts[VerdictKind::ProvenSafeForScenario]) + " safe for scenario, " +
           std::to_string(counts[VerdictKind::Error]) + " errors\n";
  }
  return out;
}

int exit_code(const ScanReport& report) {
  bool vulnerable = false;
  bool suspected = false;
  if (!report.input_errors.empty()) return 3;
  for (const auto& f : report.findings) {
    if (f.verdict == VerdictKind::Error) return 3;
    vulnerable |= f.verdict == VerdictKind::ProvenVulnerable;
    suspected |= f.verdict == VerdictKind::Suspected;
  }
  return vulnerable ? 2 : suspected ? 1 : 0;
}

}  // namespace scproof

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
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scproof/detectors.hpp"
#include "scproof/runner.hpp"

// Stage 3 interpretation: per-defect verdict tables and the findings built
// from them.
namespace scproof {

enum class VerdictKind { ProvenVulnerable, ProvenSafeForScenario, Suspected, Clean, Error };
/// Ordered so that a larger value means more confidence.
enum class Confidence { None, Low, Medium, High };
enum class FailedStage { Generation, Execution };

std::string_view to_string(VerdictKind v);
std::optional<VerdictKind> parse_verdict_kind(std::string_view text);
std::string_view to_string(Confidence c);
std::optional<Confidence> parse_confidence(std::string_view text);
std::string_view to_string(FailedStage s);

struct VerdictRow {
  /// role -> "pass" | "fail" | "error" | "*"
  std::map<std::string, std::string> pattern;
  VerdictKind verdict = VerdictKind::Error;
  Confidence confidence = Confidence::None;
  std::string note;

  bool matches(const std::map<std::string, OutcomeStatus>& statuses) const;
};

struct VerdictTable {
  std::string id;
  DefectKind defect_kind = DefectKind::Reentrancy;
  std::vector<std::string> roles;
  std::vector<VerdictRow> rows;
  VerdictRow default_row;

  /// First matching row, else the default row.
  const VerdictRow& lookup(const std::map<std::string, OutcomeStatus>& statuses) const;
};

/// Errors: TableInvalid (unknown role or status, missing fields, or two rows
/// that match the same combination of statuses).
VerdictTable parse_verdict_table(std::string_view text, std::string_view origin = "<memory>");
VerdictTable load_verdict_table(const std::filesystem::path& path);

/// Every status combination over `roles`, in lexicographic order.
std::vector<std::map<std::string, OutcomeStatus>> all_status_combinations(const std::vector<std::string>& roles);

struct Interpretation {
  VerdictKind verdict = VerdictKind::Error;
  Confidence confidence = Confidence::None;
  std::string note;
};

/// Matches the result against the table through `roles` (method -> role).
/// Methods the result reports outside `roles`, or roles no method fills,
/// give the default row with a RoleMismatch note.
Interpretation interpret(const VerdictTable& table, const ExecutionResult& result,
                         const std::map<std::string, std::string>& roles);

struct TestRecord {
  std::string method;
  std::string role;
  BackendKind backend = BackendKind::Mock;
  OutcomeStatus status = OutcomeStatus::Error;
  std::string detail;

  bool operator==(const TestRecord&) const = default;
};

std::vector<TestRecord> test_records(const ExecutionResult& result, const std::map<std::string, std::string>& roles);

struct Finding {
  std::string file;
  std::string contract;
  DefectKind defect_kind = DefectKind::Reentrancy;
  VerdictKind verdict = VerdictKind::Clean;
  Confidence confidence = Confidence::High;
  std::optional<DefectEvidence> evidence;
  std::vector<TestRecord> tests;
  std::vector<std::string> notes;
  /// Which stage failed when the verdict was degraded to suspected.
  std::optional<FailedStage> degraded_stage;
};

/// Suspected finding for evidence whose confirmation failed at `stage`:
/// medium after an execution failure, low after a generation failure, and
/// low for access control when the contract has no custom modifiers.
Finding degrade(const DefectEvidence& evidence, FailedStage stage, const std::string& reason);

/// What happened to one piece of evidence after Stage 1.
struct KindOutcome {
  enum class Kind { NotTested, Interpreted, Degraded } kind = Kind::NotTested;
  Interpretation interpretation;
  std::vector<TestRecord> tests;
  FailedStage failed_stage = FailedStage::Generation;
  std::string reason;
  std::vector<std::string> notes;
};

/// One finding per enabled kind in enum order: clean without evidence,
/// suspected when the evidence was never tested, the interpreted or
/// degraded verdict otherwise.
std::vector<Finding> finalize(const std::string& file, const std::string& contract,
                              const std::vector<DefectKind>& enabled, const std::vector<DefectEvidence>& evidence,
                              const std::map<DefectKind, KindOutcome>& outcomes);

}  // namespace scproof

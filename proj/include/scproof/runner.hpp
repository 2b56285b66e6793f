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

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scproof/llm.hpp"
#include "scproof/templates.hpp"

// Stage 3: Foundry project layout, backend invocation and outcome parsing.
namespace scproof {

enum class BackendKind { Forge, Kontrol, Mock };
enum class OutcomeStatus { Pass, Fail, Error };

std::string_view to_string(BackendKind kind);
std::optional<BackendKind> parse_backend_kind(std::string_view text);
std::string_view to_string(OutcomeStatus status);
std::optional<OutcomeStatus> parse_outcome_status(std::string_view text);

struct TestOutcome {
  OutcomeStatus status = OutcomeStatus::Error;
  std::string detail;

  bool operator==(const TestOutcome&) const = default;
};

using OutcomeMap = std::map<std::string, TestOutcome>;

struct ExecutionResult {
  BackendKind backend = BackendKind::Mock;
  OutcomeMap per_test;
  /// Methods the backend reported that the suite does not declare.
  std::set<std::string> unexpected_methods;
  std::filesystem::path raw_log_path;
  double wall_time = 0.0;
  int exit_status = 0;
  /// How per_test was obtained: "json", "regex", "llm-normalized", "mock",
  /// "compile-error", "timeout" or "unparseable".
  std::string parse_route;
  /// Set when the run as a whole produced no usable verdict (timeout,
  /// backend-side compile failure, unparseable output).
  std::string failure;

  bool run_failed() const { return !failure.empty(); }
};

struct ProjectOptions {
  /// Directory holding forge-std's src/ (a checkout or the bundled shim).
  std::filesystem::path forge_std_dir;
  /// Directory holding kontrol-cheatcodes' src/; skipped when empty.
  std::filesystem::path kontrol_cheats_dir;
  std::string solc_version = "0.8.29";
  int fuzz_runs = 256;
  /// Allow writing into a non-empty workdir (its contents are replaced).
  bool force = false;
};

/// Lays out src/<Contract>.sol, helper contracts under test/, lib/ and
/// foundry.toml, leaving the test file itself to the caller.
/// Errors: IoError, LayoutConflict.
std::filesystem::path prepare_project(std::string_view contract_source, const TestSuiteSpec& spec,
                                      const std::map<std::string, std::string>& helper_sources,
                                      const std::filesystem::path& workdir, const ProjectOptions& options);

/// prepare_project plus test/<Contract>Test.sol. An empty suite source is
/// rejected before anything is written (EmptyReply).
std::filesystem::path materialize_project(std::string_view contract_source, const GeneratedSuite& suite,
                                          const std::filesystem::path& workdir, const ProjectOptions& options);

/// The foundry.toml text written by prepare_project.
std::string foundry_config(const ProjectOptions& options);

/// Turns an unstructured runner log into outcomes; used only when the
/// structured parser finds nothing.
using LogNormalizer = std::function<NormalizedOutcomes(const std::string& log)>;

struct RunOptions {
  std::string executable;  // forge or kontrol; PATH lookup when bare
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
  LogNormalizer normalizer;  // optional
};

/// Maps each suite in forge's JSON report to outcomes keyed by method name
/// (parameter list dropped). Names seen in more than one suite are keyed
/// `<Suite>.<method>`. Errors: JsonMalformed(path).
OutcomeMap parse_forge_json(std::string_view raw);

/// Regex pass over Kontrol's plain-text output. Recognizes
/// "PROOF PASSED: <id>", "PROOF FAILED: <id>" and "PROOF <method> PASSED|FAILED".
/// Decoration between the verdict word and the id (emoji, colons) is skipped.
/// Methods without a verdict line are absent.
OutcomeMap parse_kontrol_log(std::string_view log);

/// Method name from a backend test identifier such as
/// "test%FooTest.test_bar(address):0" or "test_bar(uint256)".
std::string method_from_test_id(std::string_view id);

/// `forge test --json --match-contract <match_contract>` in project_dir.
/// Errors: BackendNotFound.
ExecutionResult run_forge(const std::filesystem::path& project_dir, const std::string& match_contract,
                          const std::vector<std::string>& expected_methods, const RunOptions& options);

/// `kontrol build` then `kontrol prove --match-test <Test>.<method>` per
/// method. Errors: BackendNotFound.
ExecutionResult run_kontrol(const std::filesystem::path& project_dir, const std::string& test_contract,
                            const std::vector<std::string>& expected_methods, const RunOptions& options);

/// Per-contract scripted outcomes, loaded from a kv file: root entries apply
/// to every contract, a [Contract] section replaces them for that contract.
/// Values read `pass`, `fail` or `error`, optionally followed by `: detail`.
struct MockScript {
  OutcomeMap defaults;
  std::map<std::string, OutcomeMap> per_contract;
  /// Contracts whose run should behave like a backend timeout (key
  /// `timeout = true`; at the root it applies to every contract).
  std::set<std::string> timeouts;
  bool timeout_all = false;

  const OutcomeMap& for_contract(const std::string& contract) const;
};

MockScript load_mock_script(const std::filesystem::path& path);
MockScript parse_mock_script(std::string_view text, std::string_view origin = "<memory>");

/// Echoes the script. The synthesized log is written to `log_path` when it
/// is non-empty. With `timed_out`, outcomes are dropped and the result
/// reports a timeout the way a real backend run would.
ExecutionResult run_mock(const OutcomeMap& script, const std::filesystem::path& log_path, bool timed_out = false);

/// Marks every expected method the backend did not report as an error with
/// `detail`, and moves reported methods outside `expected` into
/// unexpected_methods.
void reconcile(ExecutionResult& result, const std::vector<std::string>& expected, const std::string& detail);

}  // namespace scproof

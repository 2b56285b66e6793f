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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scproof/detectors.hpp"
#include "scproof/ir.hpp"
#include "scproof/llm.hpp"

// Stage 2: per-defect Solidity test templates with instruction-comment
// anchors, deterministic slot filling and prompt construction.
namespace scproof {

inline constexpr std::string_view kPlaceholder = "ContractUnderTest";
inline constexpr std::string_view kTargetPlaceholder = "targetFunction";
inline constexpr std::string_view kUnresolvedPrefix = "UNRESOLVED_";

enum class FillMode { Deterministic, Llm };
enum class BackendPreference { Forge, Kontrol, Either };

std::string_view to_string(FillMode mode);
std::string_view to_string(BackendPreference pref);

struct SlotSpec {
  std::string name;
  FillMode mode = FillMode::Deterministic;
  std::string anchor;  // full text of the instruction comment line
  std::string description;
};

struct ExpectedMethod {
  std::string name;
  std::string role;
};

struct HelperSpec {
  std::string source_file;  // template-relative, e.g. helper_Attacker.sol
  std::string target_file;  // written beside the test, e.g. Attacker.sol
  std::string source_text;
};

struct TestTemplate {
  DefectKind defect_kind = DefectKind::Reentrancy;
  std::string template_id;
  std::string description;
  std::string source_text;
  std::vector<SlotSpec> slots;
  std::vector<ExpectedMethod> expected_test_methods;
  BackendPreference backend_preference = BackendPreference::Forge;
  std::string verdict_table_id;
  std::vector<HelperSpec> helpers;
  std::filesystem::path dir;

  bool has_llm_slots() const;
  /// method name -> role tag
  std::map<std::string, std::string> roles() const;
};

/// Loads templates/<kind>/manifest plus the files it names. Errors:
/// TemplateInvalid (unknown key values, missing files, anchors or method
/// names absent from the source, deterministic slot without a rule).
TestTemplate load_template(const std::filesystem::path& dir);

class TemplateRegistry {
 public:
  /// Loads every subdirectory of `root` that holds a manifest.
  static TemplateRegistry load(const std::filesystem::path& root);
  void add(TestTemplate t);
  const TestTemplate* find(DefectKind kind) const;
  const std::vector<TestTemplate>& all() const { return templates_; }

 private:
  std::vector<TestTemplate> templates_;
};

/// The unique template for the evidence kind. Errors: NoTemplateForKind.
const TestTemplate& select_template(const TemplateRegistry& registry, const DefectEvidence& evidence);

struct TestSuiteSpec {
  DefectKind defect_kind = DefectKind::Reentrancy;
  std::string template_id;
  std::string contract_name;
  std::string import_path;  // relative to the test directory
  std::vector<std::string> constructor_args;  // literals or UNRESOLVED_<name>
  bool constructor_payable = false;
  std::string constructor_signature;
  std::vector<std::string> helper_contracts_needed;
  std::string target_function;
  std::vector<std::string> target_args;
  DefectEvidence evidence;

  bool has_unresolved() const;
  std::string test_contract_name() const { return contract_name + "Test"; }
  std::string test_file() const { return "test/" + test_contract_name() + ".sol"; }
};

/// Zero value for a parameter type usable in a test, e.g. `0`,
/// `makeAddr("owner")`, `""`. Unsupported types give UNRESOLVED_<name>.
std::string zero_value(const Param& param, std::size_t position);

/// Errors: InvalidIdentifier when the contract name is not a Solidity
/// identifier (or collides with the template placeholder).
TestSuiteSpec make_suite_spec(const TestTemplate& tmpl, const ContractIR& ir, const DefectEvidence& evidence);

/// Applies every deterministic slot rule to the template source. LLM-mode
/// anchors are left byte-identical. Errors: InvalidIdentifier, AnchorMissing.
std::string fill_deterministic(const TestTemplate& tmpl, const TestSuiteSpec& spec);

/// Helper sources with the same deterministic rules applied, keyed by the
/// file name they are written under.
std::map<std::string, std::string> fill_helpers(const TestTemplate& tmpl, const TestSuiteSpec& spec);

PromptBundle build_prompt(const TestTemplate& tmpl, const TestSuiteSpec& spec, std::string_view contract_source,
                          std::string_view partially_filled);

/// Follow-up prompt carrying compiler diagnostics for one repair round.
PromptBundle build_repair_prompt(const PromptBundle& original, std::string_view previous_code,
                                 const std::vector<std::string>& diagnostics);

struct ExtractedCode {
  std::string code;
  std::vector<std::string> warnings;
};

/// First fenced block, or the whole reply when there is no fence.
/// Errors: EmptyReply.
ExtractedCode extract_code(std::string_view reply);

struct ValidationOptions {
  bool compile = true;
  std::string solc_path = "solc";
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
};

struct Validation {
  bool compiled_ok = false;
  bool compile_checked = false;
  std::vector<std::string> diagnostics;
};

/// Checks that need no compiler: method names, contract name, placeholder
/// tokens and balanced braces. Returns the problems found.
std::vector<std::string> structural_problems(std::string_view source, const TestTemplate& tmpl,
                                             const TestSuiteSpec& spec);

/// Writes `source` to <project_dir>/test/<Contract>Test.sol and, when
/// options.compile is set, compiles it with the project's sources.
/// Errors: CompilerNotFound.
Validation validate_suite(std::string_view source, const std::filesystem::path& project_dir,
                          const TestTemplate& tmpl, const TestSuiteSpec& spec, const ValidationOptions& options);

struct GeneratedSuite {
  TestSuiteSpec spec;
  std::string test_source;
  std::map<std::string, std::string> helper_sources;
  /// slot name -> "deterministic" | "llm(<model-id>)" | "stub"
  std::map<std::string, std::string> fill_provenance;
  bool compiled_ok = false;
  bool compile_checked = false;
  std::vector<std::string> diagnostics;
  std::vector<std::string> warnings;
};

}  // namespace scproof

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

#include <algorithm>
#include <filesystem>
#include <functional>
#include <unistd.h>
#include <map>
#include <string>
#include <vector>

#include "scproof/config.hpp"
#include "scproof/detectors.hpp"
#include "scproof/ingest.hpp"
#include "scproof/ir_builder.hpp"
#include "scproof/kv.hpp"
#include "scproof/report.hpp"
#include "scproof/runner.hpp"
#include "scproof/text.hpp"

// Locations and small loaders shared by the unit and acceptance binaries.
namespace scproof::testenv {

inline std::filesystem::path source_dir() { return SCPROOF_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "tests" / "data"; }
inline std::filesystem::path fixture_dir(std::string_view kind) { return source_dir() / "fixtures" / kind; }
inline std::filesystem::path template_dir() { return source_dir() / "templates"; }

/// Empty when no compiler was found at configure time.
inline std::string solc_path() { return SCPROOF_SOLC; }
inline bool have_solc() { return !solc_path().empty() && std::filesystem::exists(solc_path()); }

inline std::vector<std::string> fixture_kinds() {
  return {"access_control", "block_env", "complex_fallback", "division_by_zero",
          "faulty_assert",  "param_validation", "reentrancy"};
}

/// The one contract the snapshot defines (fixtures hold a single contract).
inline ContractIR load_contract(const std::filesystem::path& snapshot, std::string_view name) {
  for (auto& ir : build_ir(load_ast_snapshot(snapshot)))
    if (ir.name == name) return ir;
  throw std::runtime_error("no contract " + std::string(name) + " in " + snapshot.string());
}

inline std::vector<ContractIR> load_all(const std::filesystem::path& snapshot) {
  return build_ir(load_ast_snapshot(snapshot));
}

/// Hand labels: `method = status` lines.
inline OutcomeMap read_labels(const std::filesystem::path& path) {
  OutcomeMap out;
  for (const auto& [method, status] : kv::parse_file(path).root.entries) {
    const auto parsed = parse_outcome_status(status);
    if (!parsed) throw std::runtime_error("bad label status in " + path.string());
    out[method] = TestOutcome{*parsed, ""};
  }
  return out;
}

/// Outcome maps compared on status only; details are free text.
inline std::map<std::string, std::string> statuses(const OutcomeMap& m) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : m) out[k] = std::string(to_string(v.status));
  return out;
}

/// Golden files with the given extension, sorted by name.
inline std::vector<std::filesystem::path> files_with_ext(const std::filesystem::path& dir, std::string_view ext) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("scproof-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Offline configuration for the hermetic runs: stub LLM replies, the mock
/// backend driven by `mock_script`, structural checks only.
inline PipelineConfig hermetic_config(const std::filesystem::path& workdir, const std::filesystem::path& mock_script) {
  return load_config(std::nullopt,
                     {{"offline", "true"},
                      {"backend_mode", "mock"},
                      {"mock_script", mock_script.string()},
                      {"stub_dir", (data_dir() / "stubs").string()},
                      {"compile_check", "false"},
                      {"template_dir", template_dir().string()},
                      {"workdir", workdir.string()}},
                     {});
}

/// The snapshot of the Complex Fallback example, relative to the source
/// tree so reports do not depend on the checkout location.
inline std::filesystem::path replay_input() { return "fixtures/complex_fallback/ast/vulnerable.json"; }
inline std::filesystem::path replay_mock() { return data_dir() / "mock" / "complex_fallback_replay.mock"; }
inline std::filesystem::path replay_golden() { return data_dir() / "goldens" / "reports" / "complex_fallback_replay.json"; }

/// Report JSON with run-specific values masked: timestamps, tool version
/// and the workdir prefix of every path.
inline nlohmann::json masked(const ScanReport& report, const std::filesystem::path& workdir) {
  auto j = to_json(report);
  j["started_at"] = "<TIME>";
  j["finished_at"] = "<TIME>";
  j["tool_version"] = "<VERSION>";
  const std::string prefix = workdir.generic_string();
  std::function<void(nlohmann::json&)> walk = [&](nlohmann::json& v) {
    if (v.is_string()) {
      auto s = v.get<std::string>();
      for (auto at = s.find(prefix); at != std::string::npos; at = s.find(prefix, at + 9))
        s.replace(at, prefix.size(), "<WORKDIR>");
      v = s;
    } else if (v.is_structured()) {
      for (auto& child : v) walk(child);
    }
  };
  walk(j);
  return j;
}

}  // namespace scproof::testenv

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
#include <set>
#include <string>
#include <vector>

#include "scproof/detectors.hpp"
#include "scproof/llm.hpp"

namespace scproof {

enum class BackendMode { Auto, Forge, Kontrol, Mock };

std::string_view to_string(BackendMode mode);
std::optional<BackendMode> parse_backend_mode(std::string_view text);

struct PipelineConfig {
  std::set<DefectKind> enabled_defects = all_defect_kinds();
  BackendMode backend_mode = BackendMode::Auto;
  bool offline = false;
  /// Lets an offline run still invoke a locally installed forge or kontrol.
  bool allow_local_tools = false;
  LlmConfig llm;
  std::string solc_path = "solc";
  std::string forge_path = "forge";
  std::string kontrol_path = "kontrol";
  std::filesystem::path workdir = "scproof-out";
  int fuzz_runs = 256;
  int job_cap = 4;
  std::filesystem::path template_dir;
  std::filesystem::path stub_dir;
  std::filesystem::path forge_std_dir;
  std::filesystem::path kontrol_cheats_dir;
  std::filesystem::path mock_script;
  bool compile_check = true;
  bool force = false;
  int verbosity = 0;
  std::chrono::seconds backend_timeout{600};
};

/// Flat key -> value layer. Keys are PipelineConfig field names, with LLM
/// settings under "llm." (e.g. "llm.model_id").
using ConfigLayer = std::map<std::string, std::string>;

/// Every key load_config understands.
const std::vector<std::string>& config_keys();

/// Directory holding the bundled templates/ and support/ trees.
std::filesystem::path default_data_dir();

/// Reads a config file: root keys plus an optional [llm] section.
/// Errors: ConfigInvalid.
ConfigLayer read_config_file(const std::filesystem::path& path);

/// SCPROOF_<UPPER_SNAKE> variables mapped to config keys ("llm." becomes
/// "LLM_"). Unknown SCPROOF_ variables are ignored.
ConfigLayer config_from_env(const std::map<std::string, std::string>& env);

/// Precedence: overrides > env > file > defaults. Offline runs default the
/// LLM to the stub (or disabled without a stub dir) and the backend to
/// mock. Errors: ConfigInvalid(key: reason).
PipelineConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigLayer& overrides,
                           const std::map<std::string, std::string>& env);

/// Effective configuration as kv text. Contains no secrets (the API key is
/// named, never read).
std::string describe(const PipelineConfig& config);

/// SHA-256 over the settings that can change a verdict. Paths, verbosity
/// and parallelism are left out so the digest is stable across machines.
std::string config_digest(const PipelineConfig& config);

}  // namespace scproof

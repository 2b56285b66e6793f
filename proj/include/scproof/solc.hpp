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
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

// Thin driver for the compiler's standard-JSON interface.
namespace scproof::solc {

struct Diagnostic {
  std::string severity;  // "error" | "warning" | "info"
  std::string error_code;
  std::string message;   // formattedMessage when present
};

struct Run {
  nlohmann::json output;
  std::string raw;  // output text starting at the first '{'
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const;
  std::string error_text() const;
};

/// Throws Error(CompilerNotFound) when `solc_path` does not resolve.
std::filesystem::path resolve_compiler(const std::string& solc_path);

/// Throws Error(CompileFailed) when the compiler output is not JSON.
Run run_standard_json(const std::filesystem::path& compiler, const nlohmann::json& input,
                      std::chrono::milliseconds timeout);

/// Source map keyed by project-relative generic path, following import
/// directives from `entry_key`. Relative imports resolve against the
/// importing file; others go through `remappings` (prefix -> replacement).
/// Unreadable imports are listed in `missing` and left to the compiler.
std::map<std::string, std::string> collect_sources(const std::filesystem::path& root, const std::string& entry_key,
                                                   const std::vector<std::pair<std::string, std::string>>& remappings,
                                                   std::vector<std::string>* missing = nullptr);

nlohmann::json make_input(const std::map<std::string, std::string>& sources,
                          const std::vector<std::pair<std::string, std::string>>& remappings = {});

}  // namespace scproof::solc

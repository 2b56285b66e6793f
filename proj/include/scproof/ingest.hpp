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
#include <optional>
#include <string>

#include "scproof/ir.hpp"

namespace scproof {

struct CompileOptions {
  /// solc or solcjs; resolved against PATH when it has no slash.
  std::string solc_path = "solc";
  /// Exact compiler version the caller expects (e.g. "0.8.29"). When set
  /// and the source pins a different exact version, VersionMismatch.
  std::optional<std::string> version_hint;
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
};

/// Invokes the compiler in standard-JSON mode requesting the AST.
/// Errors: CompilerNotFound, CompileFailed (diagnostics), VersionMismatch.
SourceUnit compile_to_ast(const std::filesystem::path& source_path, const CompileOptions& options);

/// Loads persisted standard-JSON output. The Solidity source is looked up
/// next to the snapshot (absolutePath relative to the snapshot directory or
/// its parent) unless `source_path` is given. Errors: MalformedAst (field
/// path), SourceNotFound.
SourceUnit load_ast_snapshot(const std::filesystem::path& json_path,
                             const std::optional<std::filesystem::path>& source_path = std::nullopt);

/// Builds a SourceUnit from standard-JSON output text already in memory.
SourceUnit source_unit_from_standard_json(const std::string& standard_json, const std::string& raw_source,
                                          const std::filesystem::path& source_path,
                                          const std::optional<std::string>& source_key = std::nullopt);

/// Exact version pinned by `pragma solidity X.Y.Z;` (also "=X.Y.Z"), else "".
std::string pragma_version(const std::string& source);

}  // namespace scproof

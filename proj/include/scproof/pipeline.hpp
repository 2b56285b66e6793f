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
#include <vector>

#include "scproof/config.hpp"
#include "scproof/report.hpp"

// Orchestration of the three stages behind the CLI subcommands.
namespace scproof {

/// Expands directories to the *.sol files below them (sorted); files are
/// kept as given, so AST snapshots (*.json) must be named explicitly.
/// Errors: SourceNotFound for a path that does not exist.
std::vector<std::filesystem::path> collect_inputs(const std::vector<std::filesystem::path>& paths);

/// Stage 1 only: findings are clean or suspected.
ScanReport cmd_detect(const std::vector<std::filesystem::path>& paths, const PipelineConfig& config);

/// Stages 1 and 2: writes one Foundry project per testable finding under
/// config.workdir. Errors: LayoutConflict (non-empty workdir without force),
/// TemplateInvalid, TableInvalid.
ScanReport cmd_gen_tests(const std::vector<std::filesystem::path>& paths, const PipelineConfig& config);

/// All three stages. Errors as cmd_gen_tests.
ScanReport cmd_run(const std::vector<std::filesystem::path>& paths, const PipelineConfig& config);

}  // namespace scproof

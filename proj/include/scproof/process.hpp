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
#include <vector>

namespace scproof {

struct ProcessSpec {
  std::filesystem::path executable;
  std::vector<std::string> args;
  std::optional<std::filesystem::path> working_dir;
  std::string stdin_data;
  std::chrono::milliseconds timeout{std::chrono::minutes(5)};
  /// Merge stderr into the stdout stream (one interleaved log).
  bool merge_stderr = true;
  /// Send stdout to this file instead of a pipe; its contents become `out`.
  /// Node tools that exit right after writing lose pipe output past 64 KiB.
  std::optional<std::filesystem::path> stdout_file;
};

struct ProcessResult {
  int exit_status = -1;
  bool timed_out = false;
  std::string out;  // stdout, or stdout+stderr when merged
  std::string err;  // empty when merged
  double wall_seconds = 0.0;
};

/// Resolves `name` against PATH unless it already contains a slash.
/// Returns nullopt when nothing executable is found.
std::optional<std::filesystem::path> find_executable(const std::string& name);

/// Runs a child process to completion or until the timeout elapses, in
/// which case the child is killed and the partial output kept. Throws
/// Error(BackendNotFound) when the executable cannot be started.
ProcessResult run_process(const ProcessSpec& spec);

}  // namespace scproof

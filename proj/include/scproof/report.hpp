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

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "scproof/verdict.hpp"

namespace scproof {

struct InputRef {
  std::string file;
  std::string contract;

  bool operator==(const InputRef&) const = default;
};

/// A file the scan could not analyze (compile failure, malformed snapshot).
struct InputError {
  std::string file;
  std::string error;

  bool operator==(const InputError&) const = default;
};

struct Artifact {
  std::string contract;
  std::string defect_kind;
  std::string kind;  // "project", "test", "helper" or "log"
  std::string path;

  bool operator==(const Artifact&) const = default;
};

struct ScanReport {
  std::string schema_version = "1";
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
  std::vector<InputRef> inputs;
  std::string config_digest;
  std::vector<Finding> findings;
  std::vector<Artifact> artifacts;
  std::vector<InputError> input_errors;
};

/// Sorts findings by (file, contract, defect kind) and inputs and
/// artifacts likewise, so equal scans render identically.
void normalize(ScanReport& report);

nlohmann::json to_json(const Finding& finding);
Finding finding_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScanReport& report);
/// Errors: JsonMalformed(path).
ScanReport report_from_json(const nlohmann::json& j);

/// Canonical JSON: sorted keys, two-space indent, LF, trailing newline.
std::string render_json(const ScanReport& report);

/// One line per non-clean finding; evidence sites at verbosity >= 1, test
/// outcomes at verbosity >= 2.
std::string render_text(const ScanReport& report, int verbosity);

/// 3 when any verdict is error or an input failed, else 2 for any proven
/// vulnerability, else 1 for any suspected finding, else 0.
int exit_code(const ScanReport& report);

bool operator==(const Finding& a, const Finding& b);
bool operator==(const ScanReport& a, const ScanReport& b);

}  // namespace scproof

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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scproof/detectors.hpp"
#include "scproof/ir.hpp"

// Stage 1 over many source units: IR construction plus detectors. The
// OpenMP kernel and the serial reference must produce identical results.
namespace scproof {

struct ContractScan {
  ContractIR ir;
  std::vector<DefectEvidence> evidence;

  bool operator==(const ContractScan&) const = default;
};

struct UnitScan {
  std::filesystem::path path;
  std::vector<ContractScan> contracts;
  /// Set when the unit could not be analysed (malformed AST); the message
  /// is the rendered Error.
  std::optional<std::string> error;

  bool operator==(const UnitScan&) const = default;
};

std::vector<UnitScan> scan_units_serial(const std::vector<SourceUnit>& units, const std::set<DefectKind>& enabled,
                                        const DetectorOptions& options = {});

/// Same result as scan_units_serial, one unit per OpenMP iteration.
/// `threads` <= 0 uses the OpenMP default.
std::vector<UnitScan> scan_units_parallel(const std::vector<SourceUnit>& units, const std::set<DefectKind>& enabled,
                                          const DetectorOptions& options = {}, int threads = 0);

}  // namespace scproof

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

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scproof/ir.hpp"

// Stage 1 prerequisite matchers. Each detector is a pure function of one
// ContractIR and either returns evidence with at least one site or nothing.
namespace scproof {

enum class DefectKind {
  Reentrancy,
  ComplexFallback,
  AccessControl,
  BlockEnvDependency,
  InsufficientParamValidation,
  FaultyAssertRevert,
  DivisionByZero
};

inline constexpr std::array<DefectKind, 7> kAllDefectKinds = {
    DefectKind::Reentrancy,         DefectKind::ComplexFallback,
    DefectKind::AccessControl,      DefectKind::BlockEnvDependency,
    DefectKind::InsufficientParamValidation, DefectKind::FaultyAssertRevert,
    DefectKind::DivisionByZero};

std::string_view to_string(DefectKind kind);
/// Accepts the enum spelling ("AccessControl") or the snake-case directory
/// name ("access_control"), case-insensitively.
std::optional<DefectKind> parse_defect_kind(std::string_view text);
/// Snake-case name used for fixture and template directories.
std::string_view dir_name(DefectKind kind);
std::set<DefectKind> all_defect_kinds();

struct EvidenceSite {
  std::string function;
  std::uint32_t statement_index = 0;
  SrcLocation location;
  std::string tag;
  /// Human-readable summary, e.g. "selfdestruct without msg.sender guard".
  std::string detail;

  bool operator==(const EvidenceSite&) const = default;
};

struct DefectEvidence {
  DefectKind kind = DefectKind::Reentrancy;
  std::string contract;
  std::vector<EvidenceSite> sites;
  std::map<std::string, std::string> gating_facts;
  std::string detector_version = "1";

  bool operator==(const DefectEvidence&) const = default;
};

struct DetectorOptions {
  /// Case-insensitive name fragments marking an address state variable as
  /// owner-like.
  std::vector<std::string> owner_like_names{"owner", "admin", "governor"};
  /// Operations treated as critical by the access-control detector. Known
  /// entries: selfdestruct, delegatecall, value_transfer, owner_write.
  std::set<std::string> critical_ops{"selfdestruct", "delegatecall", "value_transfer", "owner_write"};
};

std::optional<DefectEvidence> detect_reentrancy(const ContractIR& ir);
std::optional<DefectEvidence> detect_complex_fallback(const ContractIR& ir);
std::optional<DefectEvidence> detect_access_control(const ContractIR& ir, const DetectorOptions& options = {});
std::optional<DefectEvidence> detect_block_env(const ContractIR& ir);
std::optional<DefectEvidence> detect_param_validation(const ContractIR& ir);
std::optional<DefectEvidence> detect_faulty_assert(const ContractIR& ir);
std::optional<DefectEvidence> detect_division_by_zero(const ContractIR& ir);

/// Runs the enabled detectors in DefectKind order.
std::vector<DefectEvidence> run_detectors(const ContractIR& ir, const std::set<DefectKind>& enabled,
                                          const DetectorOptions& options = {});

nlohmann::json to_json(const EvidenceSite& site);
nlohmann::json to_json(const DefectEvidence& evidence);
DefectEvidence evidence_from_json(const nlohmann::json& j);

}  // namespace scproof

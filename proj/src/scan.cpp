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
#include "scproof/scan.hpp"

#include <omp.h>

#include "scproof/error.hpp"
#include "scproof/ir_builder.hpp"

namespace scproof {

namespace {

UnitScan scan_one(const SourceUnit& unit, const std::set<DefectKind>& enabled, const DetectorOptions& options) {
  UnitScan out;
  out.path = unit.path;
  try {
    for (auto& ir : build_ir(unit)) {
      ContractScan scan;
      scan.evidence = run_detectors(ir, enabled, options);
      scan.ir = std::move(ir);
      out.contracts.push_back(std::move(scan));
    }
  } catch (const Error& e) {
    out.contracts.clear();
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<UnitScan> scan_units_serial(const std::vector<SourceUnit>& units, const std::set<DefectKind>& enabled,
                                        const DetectorOptions& options) {
  std::vector<UnitScan> out;
  out.reserve(units.size());
  for (const auto& unit : units) out.push_back(scan_one(unit, enabled, options));
  return out;
}

std::vector<UnitScan> scan_units_parallel(const std::vector<SourceUnit>& units, const std::set<DefectKind>& enabled,
                                          const DetectorOptions& options, int threads) {
  std::vector<UnitScan> out(units.size());
  const auto n = static_cast<std::ptrdiff_t>(units.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
  // Units differ a lot in size, so hand them out one at a time.
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = scan_one(units[i], enabled, options);
  return out;
}

}  // namespace scproof

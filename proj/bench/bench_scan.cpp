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
// Stage 1 throughput over the fixture snapshots: IR construction plus all
// detectors, serial and with OpenMP across units.
#include <benchmark/benchmark.h>

#include <filesystem>

#include "scproof/ingest.hpp"
#include "scproof/scan.hpp"

namespace {

namespace fs = std::filesystem;

// Every committed snapshot, repeated to give the parallel loop some work.
const std::vector<scproof::SourceUnit>& corpus() {
  static const auto units = [] {
    std::vector<scproof::SourceUnit> base;
    for (const auto& dir : fs::directory_iterator(fs::path(SCPROOF_SOURCE_DIR) / "fixtures"))
      for (const char* variant : {"vulnerable.json", "safe.json"})
        if (fs::exists(dir.path() / "ast" / variant)) base.push_back(scproof::load_ast_snapshot(dir.path() / "ast" / variant));
    std::vector<scproof::SourceUnit> out;
    for (int i = 0; i < 16; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
  }();
  return units;
}

void BM_ScanSerial(benchmark::State& state) {
  const auto& units = corpus();
  for (auto _ : state) benchmark::DoNotOptimize(scproof::scan_units_serial(units, scproof::all_defect_kinds()));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(units.size()));
}
BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond);

void BM_ScanParallel(benchmark::State& state) {
  const auto& units = corpus();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(scproof::scan_units_parallel(units, scproof::all_defect_kinds(), {}, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(units.size()));
}
BENCHMARK(BM_ScanParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

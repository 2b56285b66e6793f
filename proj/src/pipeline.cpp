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
#include "scproof/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>

#include "scproof/error.hpp"
#include "scproof/ingest.hpp"
#include "scproof/process.hpp"
#include "scproof/runner.hpp"
#include "scproof/scan.hpp"
#include "scproof/templates.hpp"
#include "scproof/text.hpp"

namespace fs = std::filesystem;

namespace scproof {

namespace {

enum class Depth { Detect, Generate, Run };

struct Loaded {
  std::vector<std::string> files;  // as given, parallel to units
  std::vector<SourceUnit> units;
  std::vector<InputError> errors;
};

Loaded load_inputs(const std::vector<fs::path>& paths, const PipelineConfig& config) {
  Loaded out;
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    try {
      for (auto& f : collect_inputs({p})) files.push_back(std::move(f));
    } catch (const Error& e) {
      out.errors.push_back({p.generic_string(), e.what()});
    }
  }
  CompileOptions compile;
  compile.solc_path = config.solc_path;
  for (const auto& f : files) {
    try {
      if (f.extension() == ".json") out.units.push_back(load_ast_snapshot(f));
      else out.units.push_back(compile_to_ast(f, compile));
      out.files.push_back(f.generic_string());
    } catch (const Error& e) {
      out.errors.push_back({f.generic_string(), e.what()});
    }
  }
  return out;
}

std::string sanitize(std::string s) {
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') c = '_';
  return s;
}

/// Templates with their verdict tables, checked against each other.
struct Catalog {
  TemplateRegistry templates;
  std::map<DefectKind, VerdictTable> tables;
};

Catalog load_catalog(const fs::path& template_dir) {
  Catalog c;
  c.templates = TemplateRegistry::load(template_dir);
  for (const auto& t : c.templates.all()) {
    auto table = load_verdict_table(t.dir / (t.verdict_table_id + ".table"));
    if (table.defect_kind != t.defect_kind)
      throw Error(ErrorCode::TableInvalid, table.id + " is for a different defect kind than " + t.template_id);
    std::set<std::string> template_roles;
    for (const auto& m : t.expected_test_methods) template_roles.insert(m.role);
    if (template_roles != std::set<std::string>(table.roles.begin(), table.roles.end()))
      throw Error(ErrorCode::TableInvalid, table.id + " roles differ from " + t.template_id);
    c.tables.emplace(t.defect_kind, std::move(table));
  }
  return c;
}

struct Context {
  const PipelineConfig& config;
  Depth depth;
  const Catalog& catalog;
  LlmClient& llm;
  const MockScript& mock;
};

struct ItemResult {
  std::map<DefectKind, KindOutcome> outcomes;
  std::vector<Artifact> artifacts;
};

std::string provenance_note(const GeneratedSuite& suite) {
  std::string note = "slots:";
  for (const auto& [slot, how] : suite.fill_provenance) note += " " + slot + "=" + how;
  return note;
}

/// Stage 2 for one piece of evidence. Returns the suite, or sets `failure`.
std::optional<GeneratedSuite> generate(const Context& ctx, const TestTemplate& tmpl, const SourceUnit& unit,
                                       const ContractIR& ir, const DefectEvidence& ev, const fs::path& dir,
                                       std::string& failure, std::vector<std::string>& notes) {
  GeneratedSuite suite;
  try {
    suite.spec = make_suite_spec(tmpl, ir, ev);
    suite.helper_sources = fill_helpers(tmpl, suite.spec);
    ProjectOptions project;
    project.forge_std_dir = ctx.config.forge_std_dir;
    project.kontrol_cheats_dir = ctx.config.kontrol_cheats_dir;
    if (!unit.solidity_version.empty()) project.solc_version = unit.solidity_version;
    project.fuzz_runs = ctx.config.fuzz_runs;
    project.force = true;  // the workdir as a whole was checked up front
    prepare_project(unit.raw_source, suite.spec, suite.helper_sources, dir, project);

    const std::string filled = fill_deterministic(tmpl, suite.spec);
    for (const auto& slot : tmpl.slots)
      if (slot.mode == FillMode::Deterministic) suite.fill_provenance[slot.name] = "deterministic";
    const std::string llm_label = ctx.config.llm.mode == LlmMode::Live
                                      ? "llm(" + ctx.config.llm.model_id + ")"
                                      : "llm(offline-stub)";

    const PromptBundle prompt = build_prompt(tmpl, suite.spec, unit.raw_source, filled);
    std::string code = filled;
    if (tmpl.has_llm_slots()) {
      auto extracted = extract_code(ctx.llm.ask(prompt));
      code = std::move(extracted.code);
      suite.warnings = std::move(extracted.warnings);
      for (const auto& slot : tmpl.slots)
        if (slot.mode == FillMode::Llm) suite.fill_provenance[slot.name] = llm_label;
    }
    ValidationOptions vopts;
    vopts.compile = ctx.config.compile_check;
    vopts.solc_path = ctx.config.solc_path;
    auto v = validate_suite(code, dir, tmpl, suite.spec, vopts);
    if (!v.compiled_ok && ctx.config.llm.mode != LlmMode::Disabled) {
      // One repair round with the diagnostics, then give up.
      notes.push_back("repair round: " + v.diagnostics.front());
      auto extracted = extract_code(ctx.llm.ask(build_repair_prompt(prompt, code, v.diagnostics)));
      code = std::move(extracted.code);
      for (auto& w : extracted.warnings) suite.warnings.push_back(std::move(w));
      for (const auto& slot : tmpl.slots)
        if (slot.mode == FillMode::Llm || suite.spec.has_unresolved()) suite.fill_provenance[slot.name] = llm_label;
      v = validate_suite(code, dir, tmpl, suite.spec, vopts);
    }
    suite.test_source = code;
    suite.compiled_ok = v.compiled_ok;
    suite.compile_checked = v.compile_checked;
    suite.diagnostics = v.diagnostics;
    for (const auto& w : suite.warnings) notes.push_back("warning: " + w);
    if (!v.compiled_ok) {
      failure = "test did not validate: " + v.diagnostics.front();
      return std::nullopt;
    }
    return suite;
  } catch (const Error& e) {
    failure = e.what();
    return std::nullopt;
  }
}

ExecutionResult execute(const Context& ctx, const TestTemplate& tmpl, const GeneratedSuite& suite,
                        const fs::path& dir) {
  std::vector<std::string> expected;
  for (const auto& m : tmpl.expected_test_methods) expected.push_back(m.name);
  const std::string& contract = suite.spec.contract_name;

  if (ctx.config.backend_mode == BackendMode::Mock) {
    const auto& script = ctx.mock.for_contract(contract);
    OutcomeMap mine;
    for (const auto& m : expected)
      if (auto it = script.find(m); it != script.end()) mine.emplace(m, it->second);
    const bool timed_out = ctx.mock.timeout_all || ctx.mock.timeouts.contains(contract);
    auto result = run_mock(mine, dir / "scproof-run.log", timed_out);
    reconcile(result, expected, timed_out ? "timeout" : "not scripted");
    return result;
  }

  BackendKind backend = BackendKind::Forge;
  if (ctx.config.backend_mode == BackendMode::Kontrol) {
    backend = BackendKind::Kontrol;
  } else if (ctx.config.backend_mode == BackendMode::Auto && tmpl.backend_preference == BackendPreference::Kontrol) {
    // Symbolic when kontrol is installed, forge fuzzing otherwise.
    if (find_executable(ctx.config.kontrol_path)) backend = BackendKind::Kontrol;
  }
  RunOptions run;
  run.timeout = ctx.config.backend_timeout;
  if (ctx.config.llm.mode != LlmMode::Disabled) {
    LlmClient* client = &ctx.llm;
    run.normalizer = [client, contract](const std::string& log) {
      return normalize_runner_output(*client, log, contract);
    };
  }
  if (backend == BackendKind::Kontrol) {
    run.executable = ctx.config.kontrol_path;
    return run_kontrol(dir, suite.spec.test_contract_name(), expected, run);
  }
  run.executable = ctx.config.forge_path;
  return run_forge(dir, suite.spec.test_contract_name(), expected, run);
}

ItemResult process_contract(const Context& ctx, const SourceUnit& unit, const ContractScan& scan,
                            const fs::path& contract_dir) {
  ItemResult out;
  for (const auto& ev : scan.evidence) {
    KindOutcome oc;
    const TestTemplate* tmpl = ctx.catalog.templates.find(ev.kind);
    if (!tmpl) {
      oc.notes.push_back("no test template for " + std::string(to_string(ev.kind)) + "; stage 1 evidence only");
      out.outcomes[ev.kind] = std::move(oc);
      continue;
    }
    const fs::path dir = contract_dir / dir_name(ev.kind);
    std::string failure;
    auto suite = generate(ctx, *tmpl, unit, scan.ir, ev, dir, failure, oc.notes);
    const std::string kind_name(to_string(ev.kind));
    if (!suite) {
      oc.kind = KindOutcome::Kind::Degraded;
      oc.failed_stage = FailedStage::Generation;
      oc.reason = failure;
      out.outcomes[ev.kind] = std::move(oc);
      continue;
    }
    out.artifacts.push_back({scan.ir.name, kind_name, "project", dir.generic_string()});
    out.artifacts.push_back({scan.ir.name, kind_name, "test", (dir / suite->spec.test_file()).generic_string()});
    for (const auto& [name, _] : suite->helper_sources)
      out.artifacts.push_back({scan.ir.name, kind_name, "helper", (dir / "test" / name).generic_string()});
    oc.notes.push_back(provenance_note(*suite));
    if (ctx.depth == Depth::Generate) {
      oc.notes.push_back("test generated: " + (dir / suite->spec.test_file()).generic_string());
      out.outcomes[ev.kind] = std::move(oc);
      continue;
    }

    try {
      auto result = execute(ctx, *tmpl, *suite, dir);
      if (!result.raw_log_path.empty())
        out.artifacts.push_back({scan.ir.name, kind_name, "log", result.raw_log_path.generic_string()});
      if (result.run_failed()) {
        oc.kind = KindOutcome::Kind::Degraded;
        oc.failed_stage = FailedStage::Execution;
        oc.reason = result.failure;
      } else {
        const auto roles = tmpl->roles();
        oc.kind = KindOutcome::Kind::Interpreted;
        oc.interpretation = interpret(ctx.catalog.tables.at(ev.kind), result, roles);
        oc.tests = test_records(result, roles);
      }
    } catch (const Error& e) {
      oc.kind = KindOutcome::Kind::Degraded;
      oc.failed_stage = FailedStage::Execution;
      oc.reason = e.what();
    }
    out.outcomes[ev.kind] = std::move(oc);
  }
  return out;
}

ScanReport run_pipeline(const std::vector<fs::path>& paths, const PipelineConfig& config, Depth depth) {
  ScanReport report;
  report.tool_version = SCPROOF_VERSION;
  report.started_at = text::utc_timestamp();
  report.config_digest = config_digest(config);

  std::optional<Catalog> catalog;
  if (depth != Depth::Detect) {
    std::error_code ec;
    if (fs::exists(config.workdir, ec) && !fs::is_empty(config.workdir, ec) && !config.force)
      throw Error(ErrorCode::LayoutConflict, config.workdir.generic_string() + " is not empty (use --force)");
    catalog = load_catalog(config.template_dir);
  }

  auto loaded = load_inputs(paths, config);
  report.input_errors = loaded.errors;
  const auto scans = scan_units_parallel(loaded.units, config.enabled_defects, {}, config.job_cap);

  struct Item {
    std::size_t unit;
    std::size_t contract;
    fs::path dir;
  };
  std::vector<Item> items;
  std::set<std::string> used_dirs;
  for (std::size_t u = 0; u < scans.size(); ++u) {
    if (scans[u].error) {
      report.input_errors.push_back({loaded.files[u], *scans[u].error});
      continue;
    }
    std::string stem = sanitize(fs::path(loaded.files[u]).stem().string());
    std::string unique = stem;
    for (int n = 2; used_dirs.contains(unique); ++n) unique = stem + "_" + std::to_string(n);
    used_dirs.insert(unique);
    for (std::size_t c = 0; c < scans[u].contracts.size(); ++c) {
      report.inputs.push_back({loaded.files[u], scans[u].contracts[c].ir.name});
      items.push_back({u, c, config.workdir / unique / scans[u].contracts[c].ir.name});
    }
  }

  std::vector<ItemResult> results(items.size());
  if (depth != Depth::Detect) {
    std::mutex log_mutex;
    std::optional<fs::path> llm_log;
    if (config.llm.mode != LlmMode::Disabled) {
      fs::create_directories(config.workdir);
      llm_log = config.workdir / "llm.log";
      text::write_file(*llm_log, "");
    }
    LlmClient client(config.llm, [&](const std::string& line) {
      if (!llm_log) return;
      std::lock_guard lock(log_mutex);
      std::ofstream(*llm_log, std::ios::app) << line << "\n";
    });
    MockScript mock;
    if (config.backend_mode == BackendMode::Mock && !config.mock_script.empty())
      mock = load_mock_script(config.mock_script);
    const Context ctx{config, depth, *catalog, client, mock};

    const int n = static_cast<int>(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, config.job_cap))
    for (int i = 0; i < n; ++i) {
      const auto& item = items[i];
      try {
        results[i] = process_contract(ctx, loaded.units[item.unit], scans[item.unit].contracts[item.contract], item.dir);
      } catch (const std::exception& e) {
        // process_contract handles library errors itself; anything else is
        // reported against every piece of evidence of this contract.
        for (const auto& ev : scans[item.unit].contracts[item.contract].evidence) {
          KindOutcome oc;
          oc.kind = KindOutcome::Kind::Degraded;
          oc.failed_stage = depth == Depth::Run ? FailedStage::Execution : FailedStage::Generation;
          oc.reason = e.what();
          results[i].outcomes[ev.kind] = std::move(oc);
        }
      }
    }
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    const auto& scan = scans[item.unit].contracts[item.contract];
    auto findings = finalize(loaded.files[item.unit], scan.ir.name,
                             std::vector<DefectKind>(config.enabled_defects.begin(), config.enabled_defects.end()),
                             scan.evidence, results[i].outcomes);
    for (auto& f : findings) report.findings.push_back(std::move(f));
    for (auto& a : results[i].artifacts) report.artifacts.push_back(std::move(a));
  }
  normalize(report);
  report.finished_at = text::utc_timestamp();
  return report;
}

}  // namespace

std::vector<fs::path> collect_inputs(const std::vector<fs::path>& paths) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::recursive_directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".sol") found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p, ec)) {
      out.push_back(p);
    } else {
      throw Error(ErrorCode::SourceNotFound, p.generic_string());
    }
  }
  return out;
}

ScanReport cmd_detect(const std::vector<fs::path>& paths, const PipelineConfig& config) {
  return run_pipeline(paths, config, Depth::Detect);
}

ScanReport cmd_gen_tests(const std::vector<fs::path>& paths, const PipelineConfig& config) {
  return run_pipeline(paths, config, Depth::Generate);
}

ScanReport cmd_run(const std::vector<fs::path>& paths, const PipelineConfig& config) {
  return run_pipeline(paths, config, Depth::Run);
}

}  // namespace scproof

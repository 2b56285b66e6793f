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
// Command-line front end: scan | detect | gen-tests | run | snapshot.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "scproof/config.hpp"
#include "scproof/error.hpp"
#include "scproof/ingest.hpp"
#include "scproof/pipeline.hpp"
#include "scproof/report.hpp"
#include "scproof/text.hpp"

extern char** environ;

namespace {

struct Options {
  std::vector<std::string> paths;
  std::string config_file;
  std::string out;
  std::string format = "text";
  int verbose = 0;
  scproof::ConfigLayer overrides;
};

std::map<std::string, std::string> scproof_env() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    if (!entry.starts_with("SCPROOF_")) continue;
    auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return env;
}

void add_pipeline_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("paths", o.paths, "Solidity files, directories, or AST snapshots (*.json)")->required();
  cmd->add_option("--config", o.config_file, "Config file (key = value, optional [llm] section)");
  cmd->add_option("--out", o.out, "Write the report here instead of stdout");
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("-v,--verbose", o.verbose, "More detail; repeat for test outcomes");

  auto setter = [&o](const std::string& key) {
    return [&o, key](const std::string& value) { o.overrides[key] = value; };
  };
  auto flag_setter = [&o](const std::string& key, const std::string& value) {
    return [&o, key, value](std::int64_t) { o.overrides[key] = value; };
  };
  cmd->add_option_function<std::string>("--defects", setter("enabled_defects"), "Comma list of defect kinds, or all");
  cmd->add_option_function<std::string>("--backend", setter("backend_mode"), "auto | forge | kontrol | mock");
  cmd->add_flag_function("--offline", flag_setter("offline", "true"), "No network: stub LLM replies, mock backend");
  cmd->add_flag_function("--allow-local-tools", flag_setter("allow_local_tools", "true"),
                         "Permit forge or kontrol in offline runs");
  cmd->add_option_function<std::string>("--workdir", setter("workdir"), "Where generated projects go");
  cmd->add_flag_function("--force", flag_setter("force", "true"), "Reuse a non-empty workdir");
  cmd->add_flag_function("--no-compile-check", flag_setter("compile_check", "false"),
                         "Validate generated tests structurally only");
  cmd->add_option_function<std::string>("--solc", setter("solc_path"), "Solidity compiler (solc or solcjs)");
  cmd->add_option_function<std::string>("--forge", setter("forge_path"), "forge executable");
  cmd->add_option_function<std::string>("--kontrol", setter("kontrol_path"), "kontrol executable");
  cmd->add_option_function<std::string>("--fuzz-runs", setter("fuzz_runs"), "Fuzz runs pinned in foundry.toml");
  cmd->add_option_function<std::string>("--jobs", setter("job_cap"), "Contracts processed in parallel");
  cmd->add_option_function<std::string>("--template-dir", setter("template_dir"), "Test template directory");
  cmd->add_option_function<std::string>("--stub-dir", setter("stub_dir"), "Canned LLM replies for offline runs");
  cmd->add_option_function<std::string>("--mock-script", setter("mock_script"), "Scripted outcomes for --backend mock");
  cmd->add_option_function<std::string>("--llm-mode", setter("llm.mode"), "live | offline_stub | disabled");
  cmd->add_option_function<std::string>("--model", setter("llm.model_id"), "Model id sent to the endpoint");
  cmd->add_option_function<std::string>("--endpoint", setter("llm.endpoint_url"), "OpenAI-compatible base URL");
}

int run_pipeline_command(const std::string& name, Options& o) {
  o.overrides["verbosity"] = std::to_string(o.verbose);
  std::optional<std::filesystem::path> file;
  if (!o.config_file.empty()) file = o.config_file;
  const auto config = scproof::load_config(file, o.overrides, scproof_env());
  if (config.verbosity >= 1) std::cerr << "# effective configuration\n" << scproof::describe(config) << "\n";

  std::vector<std::filesystem::path> paths(o.paths.begin(), o.paths.end());
  scproof::ScanReport report;
  if (name == "detect") report = scproof::cmd_detect(paths, config);
  else if (name == "gen-tests") report = scproof::cmd_gen_tests(paths, config);
  else report = scproof::cmd_run(paths, config);

  const std::string rendered =
      o.format == "json" ? scproof::render_json(report) : scproof::render_text(report, config.verbosity);
  if (o.out.empty()) std::cout << rendered;
  else scproof::text::write_file(o.out, rendered);
  return scproof::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scproof: find Solidity defects, then prove or refute them with generated tests"};
  app.set_version_flag("--version", SCPROOF_VERSION);
  app.require_subcommand(1);

  Options o;
  std::vector<std::pair<std::string, CLI::App*>> pipeline_cmds;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"scan", "Same as run"},
           {"detect", "Stage 1: static detectors only"},
           {"gen-tests", "Stages 1-2: detectors plus generated test projects"},
           {"run", "All stages: detect, generate tests, execute, interpret"}}) {
    auto* cmd = app.add_subcommand(name, help);
    add_pipeline_flags(cmd, o);
    pipeline_cmds.emplace_back(name, cmd);
  }

  std::string snap_source;
  std::string snap_out;
  std::string snap_solc = "solc";
  auto* snapshot = app.add_subcommand("snapshot", "Compile a file and save the compiler's AST output");
  snapshot->add_option("source", snap_source, "Solidity file")->required();
  snapshot->add_option("-o,--out", snap_out, "Output JSON path")->required();
  snapshot->add_option("--solc", snap_solc, "Solidity compiler (solc or solcjs)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (snapshot->parsed()) {
      scproof::CompileOptions opts;
      opts.solc_path = snap_solc;
      const auto unit = scproof::compile_to_ast(snap_source, opts);
      scproof::text::write_file(snap_out, unit.standard_json);
      return 0;
    }
    for (auto& [name, cmd] : pipeline_cmds)
      if (cmd->parsed()) return run_pipeline_command(name, o);
  } catch (const scproof::Error& e) {
    std::cerr << "scproof: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

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
#include "scproof/runner.hpp"

#include <nlohmann/json.hpp>
#include <regex>

#include "scproof/error.hpp"
#include "scproof/kv.hpp"
#include "scproof/process.hpp"
#include "scproof/text.hpp"

namespace fs = std::filesystem;

namespace scproof {

namespace {

constexpr std::string_view kLogName = "scproof-run.log";

void copy_tree(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  if (!fs::exists(from / "src", ec))
    throw Error(ErrorCode::IoError, from.generic_string() + " has no src/ directory");
  fs::create_directories(to, ec);
  fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing, ec);
  if (ec) throw Error(ErrorCode::IoError, "copy " + from.generic_string() + ": " + ec.message());
}

fs::path resolve_backend(const std::string& executable, std::string_view fallback) {
  const auto found = find_executable(executable.empty() ? std::string(fallback) : executable);
  if (!found) throw Error(ErrorCode::BackendNotFound, executable.empty() ? std::string(fallback) : executable);
  return *found;
}

// First line mentioning a compiler error, used as the detail for every test.
std::optional<std::string> compile_error_line(std::string_view log) {
  static const std::regex re(R"((Compiler run failed|Error( \(\d+\))?:|ParserError|TypeError|DeclarationError))");
  for (auto line : text::split_lines(log)) {
    const std::string l(line);
    if (std::regex_search(l, re)) return std::string(text::trim(l));
  }
  return std::nullopt;
}

void write_log(const fs::path& path, const std::string& log) {
  if (!path.empty()) text::write_file(path, log);
}

}  // namespace

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::Forge: return "forge";
    case BackendKind::Kontrol: return "kontrol";
    case BackendKind::Mock: return "mock";
  }
  return "mock";
}

std::optional<BackendKind> parse_backend_kind(std::string_view text) {
  if (text == "forge") return BackendKind::Forge;
  if (text == "kontrol") return BackendKind::Kontrol;
  if (text == "mock") return BackendKind::Mock;
  return std::nullopt;
}

std::string_view to_string(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::Pass: return "pass";
    case OutcomeStatus::Fail: return "fail";
    case OutcomeStatus::Error: return "error";
  }
  return "error";
}

std::optional<OutcomeStatus> parse_outcome_status(std::string_view text) {
  if (text == "pass") return OutcomeStatus::Pass;
  if (text == "fail") return OutcomeStatus::Fail;
  if (text == "error") return OutcomeStatus::Error;
  return std::nullopt;
}

std::string foundry_config(const ProjectOptions& options) {
  std::string out;
  out += "[profile.default]\n";
  out += "src = \"src\"\n";
  out += "test = \"test\"\n";
  out += "out = \"out\"\n";
  out += "libs = [\"lib\"]\n";
  out += "solc_version = \"" + options.solc_version + "\"\n";
  out += "remappings = [\"forge-std/=lib/forge-std/src/\"";
  if (!options.kontrol_cheats_dir.empty()) out += ", \"kontrol-cheatcodes/=lib/kontrol-cheatcodes/src/\"";
  out += "]\n\n";
  out += "[fuzz]\n";
  out += "runs = " + std::to_string(options.fuzz_runs) + "\n";
  return out;
}

fs::path prepare_project(std::string_view contract_source, const TestSuiteSpec& spec,
                         const std::map<std::string, std::string>& helper_sources, const fs::path& workdir,
                         const ProjectOptions& options) {
  std::error_code ec;
  if (fs::exists(workdir, ec)) {
    if (!fs::is_directory(workdir, ec)) throw Error(ErrorCode::LayoutConflict, workdir.generic_string() + " is a file");
    if (!fs::is_empty(workdir, ec)) {
      if (!options.force) throw Error(ErrorCode::LayoutConflict, workdir.generic_string() + " is not empty");
      for (const auto& entry : fs::directory_iterator(workdir)) fs::remove_all(entry.path(), ec);
    }
  }
  for (const char* sub : {"src", "test", "lib"}) {
    fs::create_directories(workdir / sub, ec);
    if (ec) throw Error(ErrorCode::IoError, "create " + (workdir / sub).generic_string() + ": " + ec.message());
  }
  text::write_file(workdir / "src" / (spec.contract_name + ".sol"), contract_source);
  for (const auto& [name, source] : helper_sources) text::write_file(workdir / "test" / name, source);
  if (!options.forge_std_dir.empty()) copy_tree(options.forge_std_dir, workdir / "lib" / "forge-std");
  if (!options.kontrol_cheats_dir.empty())
    copy_tree(options.kontrol_cheats_dir, workdir / "lib" / "kontrol-cheatcodes");
  text::write_file(workdir / "foundry.toml", foundry_config(options));
  return workdir;
}

fs::path materialize_project(std::string_view contract_source, const GeneratedSuite& suite, const fs::path& workdir,
                             const ProjectOptions& options) {
  if (text::trim(suite.test_source).empty())
    throw Error(ErrorCode::EmptyReply, "suite for " + suite.spec.contract_name + " has no test source");
  prepare_project(contract_source, suite.spec, suite.helper_sources, workdir, options);
  text::write_file(workdir / suite.spec.test_file(), suite.test_source);
  return workdir;
}

std::string method_from_test_id(std::string_view id) {
  std::string s(text::trim(id));
  if (auto paren = s.find('('); paren != std::string::npos) {
    s.erase(paren);
  } else {
    static const std::regex suffix(R"(:\d+$)");
    s = std::regex_replace(s, suffix, "");
  }
  if (auto dot = s.rfind('.'); dot != std::string::npos) s.erase(0, dot + 1);
  if (auto pct = s.rfind('%'); pct != std::string::npos) s.erase(0, pct + 1);
  return s;
}

OutcomeMap parse_forge_json(std::string_view raw) {
  // forge may print progress lines before the report; the report is the
  // first line that opens an object.
  std::size_t start = std::string_view::npos;
  for (std::size_t pos = 0; pos < raw.size();) {
    const auto nl = raw.find('\n', pos);
    const auto line = raw.substr(pos, nl == std::string_view::npos ? raw.size() - pos : nl - pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] == '{') {
      start = pos + first;
      break;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (start == std::string_view::npos) throw Error(ErrorCode::JsonMalformed, "/ (no JSON object)");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw.substr(start));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, std::string("/ (") + e.what() + ")");
  }
  if (!doc.is_object()) throw Error(ErrorCode::JsonMalformed, "/ (not an object)");

  struct Entry {
    std::string suite;
    std::string method;
    TestOutcome outcome;
  };
  std::vector<Entry> entries;
  std::map<std::string, int> seen;
  for (const auto& [suite_key, suite] : doc.items()) {
    const std::string base = "/" + suite_key;
    if (!suite.is_object()) throw Error(ErrorCode::JsonMalformed, base);
    auto results = suite.find("test_results");
    if (results == suite.end() || !results->is_object()) throw Error(ErrorCode::JsonMalformed, base + "/test_results");
    const auto colon = suite_key.rfind(':');
    const std::string suite_name = colon == std::string::npos ? suite_key : suite_key.substr(colon + 1);
    for (const auto& [test_key, test] : results->items()) {
      const std::string path = base + "/test_results/" + test_key;
      if (!test.is_object()) throw Error(ErrorCode::JsonMalformed, path);
      auto status = test.find("status");
      if (status == test.end() || !status->is_string()) throw Error(ErrorCode::JsonMalformed, path + "/status");
      Entry e{suite_name, method_from_test_id(test_key), {}};
      const auto text_status = status->get<std::string>();
      if (text_status == "Success") {
        e.outcome.status = OutcomeStatus::Pass;
      } else if (text_status == "Failure") {
        e.outcome.status = OutcomeStatus::Fail;
        if (auto reason = test.find("reason"); reason != test.end() && reason->is_string())
          e.outcome.detail = reason->get<std::string>();
      } else {
        e.outcome.status = OutcomeStatus::Error;
        e.outcome.detail = text_status;
      }
      ++seen[e.method];
      entries.push_back(std::move(e));
    }
  }
  OutcomeMap out;
  for (auto& e : entries) {
    const std::string key = seen[e.method] > 1 ? e.suite + "." + e.method : e.method;
    out[key] = std::move(e.outcome);
  }
  return out;
}

OutcomeMap parse_kontrol_log(std::string_view log) {
  static const std::regex status_first(R"(PROOF\s+(PASSED|FAILED)\b[^A-Za-z_$%\n]*([A-Za-z_$%]\S*))");
  static const std::regex id_first(R"(PROOF\s+([A-Za-z_$%][^\s]*)\s+(PASSED|FAILED)\b)");
  OutcomeMap out;
  auto record = [&out](const std::string& id, bool passed) {
    const std::string method = method_from_test_id(id);
    if (method.empty()) return;
    auto [it, inserted] = out.try_emplace(method, TestOutcome{passed ? OutcomeStatus::Pass : OutcomeStatus::Fail, ""});
    // A refutation anywhere in the log outweighs a passing line.
    if (!inserted && !passed) it->second.status = OutcomeStatus::Fail;
    if (!passed) it->second.detail = "counterexample found";
  };
  for (auto raw : text::split_lines(log)) {
    const std::string line(raw);
    std::smatch m;
    if (std::regex_search(line, m, status_first)) record(m[2].str(), m[1].str() == "PASSED");
    else if (std::regex_search(line, m, id_first)) record(m[1].str(), m[2].str() == "PASSED");
  }
  return out;
}

void reconcile(ExecutionResult& result, const std::vector<std::string>& expected, const std::string& detail) {
  const std::set<std::string> wanted(expected.begin(), expected.end());
  for (auto it = result.per_test.begin(); it != result.per_test.end();) {
    if (!wanted.contains(it->first)) {
      result.unexpected_methods.insert(it->first);
      it = result.per_test.erase(it);
    } else {
      ++it;
    }
  }
  for (const auto& m : expected)
    if (!result.per_test.contains(m)) result.per_test[m] = TestOutcome{OutcomeStatus::Error, detail};
}

ExecutionResult run_forge(const fs::path& project_dir, const std::string& match_contract,
                          const std::vector<std::string>& expected_methods, const RunOptions& options) {
  ProcessSpec spec;
  spec.executable = resolve_backend(options.executable, "forge");
  spec.args = {"test", "--json", "--match-contract", match_contract, "--root", project_dir.string()};
  spec.working_dir = project_dir;
  spec.timeout = options.timeout;
  spec.merge_stderr = false;
  const auto proc = run_process(spec);

  ExecutionResult result;
  result.backend = BackendKind::Forge;
  result.raw_log_path = project_dir / kLogName;
  result.wall_time = proc.wall_seconds;
  result.exit_status = proc.exit_status;
  const std::string log = proc.out + proc.err;
  write_log(result.raw_log_path, log);

  if (proc.timed_out) {
    result.parse_route = "timeout";
    result.failure = "timeout";
    reconcile(result, expected_methods, "timeout");
    return result;
  }
  try {
    result.per_test = parse_forge_json(proc.out);
    result.parse_route = "json";
    reconcile(result, expected_methods, "not reported by forge");
    return result;
  } catch (const Error&) {
  }
  if (auto line = compile_error_line(log)) {
    result.parse_route = "compile-error";
    result.failure = "compile error: " + *line;
    reconcile(result, expected_methods, *line);
    return result;
  }
  if (options.normalizer) {
    try {
      for (const auto& [method, status] : options.normalizer(log))
        result.per_test[method] = TestOutcome{*parse_outcome_status(status), "normalized"};
      result.parse_route = "llm-normalized";
      reconcile(result, expected_methods, "not reported by forge");
      return result;
    } catch (const Error&) {
    }
  }
  result.parse_route = "unparseable";
  result.failure = "unparseable forge output";
  reconcile(result, expected_methods, "unparseable forge output");
  return result;
}

ExecutionResult run_kontrol(const fs::path& project_dir, const std::string& test_contract,
                            const std::vector<std::string>& expected_methods, const RunOptions& options) {
  const auto exe = resolve_backend(options.executable, "kontrol");
  ExecutionResult result;
  result.backend = BackendKind::Kontrol;
  result.raw_log_path = project_dir / kLogName;
  const auto deadline = std::chrono::steady_clock::now() + options.timeout;
  std::string log;

  auto run = [&](std::vector<std::string> args) {
    ProcessSpec spec;
    spec.executable = exe;
    spec.args = std::move(args);
    spec.working_dir = project_dir;
    spec.timeout = std::max(std::chrono::milliseconds(1), std::chrono::duration_cast<std::chrono::milliseconds>(
                                                              deadline - std::chrono::steady_clock::now()));
    auto proc = run_process(spec);
    log += proc.out;
    result.wall_time += proc.wall_seconds;
    result.exit_status = proc.exit_status;
    return proc;
  };

  const auto build = run({"build"});
  if (build.timed_out || build.exit_status != 0) {
    write_log(result.raw_log_path, log);
    result.parse_route = build.timed_out ? "timeout" : "compile-error";
    result.failure = build.timed_out ? "proof-timeout" : "kontrol build failed";
    reconcile(result, expected_methods, result.failure);
    return result;
  }
  bool timed_out = false;
  for (const auto& method : expected_methods) {
    if (std::chrono::steady_clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    const auto proc = run({"prove", "--match-test", test_contract + "." + method});
    if (proc.timed_out) {
      timed_out = true;
      break;
    }
  }
  write_log(result.raw_log_path, log);

  result.per_test = parse_kontrol_log(log);
  result.parse_route = "regex";
  if (result.per_test.empty() && !timed_out && options.normalizer) {
    try {
      for (const auto& [method, status] : options.normalizer(log))
        result.per_test[method] = TestOutcome{*parse_outcome_status(status), "normalized"};
      result.parse_route = "llm-normalized";
    } catch (const Error&) {
    }
  }
  if (timed_out) {
    result.failure = "proof-timeout";
    if (result.per_test.empty()) result.parse_route = "timeout";
    reconcile(result, expected_methods, "proof-timeout");
    return result;
  }
  if (result.per_test.empty()) {
    result.parse_route = "unparseable";
    result.failure = "unparseable kontrol output";
  }
  reconcile(result, expected_methods, "no proof result in kontrol output");
  return result;
}

const OutcomeMap& MockScript::for_contract(const std::string& contract) const {
  auto it = per_contract.find(contract);
  return it == per_contract.end() ? defaults : it->second;
}

MockScript parse_mock_script(std::string_view text, std::string_view origin) {
  const auto doc = kv::parse(text, origin);
  auto parse_section = [&](const kv::Section& section, OutcomeMap& into, bool& timeout) {
    for (const auto& [key, value] : section.entries) {
      if (key == "timeout") {
        timeout = value == "true";
        continue;
      }
      const auto colon = value.find(':');
      const std::string status(text::trim(std::string_view(value).substr(0, colon)));
      auto parsed = parse_outcome_status(status);
      if (!parsed)
        throw Error(ErrorCode::ConfigInvalid, std::string(origin) + ": " + key + ": unknown status '" + status + "'");
      std::string detail =
          colon == std::string::npos ? "" : std::string(text::trim(std::string_view(value).substr(colon + 1)));
      into[key] = TestOutcome{*parsed, std::move(detail)};
    }
  };
  MockScript script;
  parse_section(doc.root, script.defaults, script.timeout_all);
  for (const auto& section : doc.sections) {
    if (section.repeated) throw Error(ErrorCode::ConfigInvalid, std::string(origin) + ": groups are not allowed");
    bool timeout = false;
    parse_section(section, script.per_contract[section.name], timeout);
    if (timeout) script.timeouts.insert(section.name);
  }
  return script;
}

MockScript load_mock_script(const fs::path& path) { return parse_mock_script(text::read_file(path), path.generic_string()); }

ExecutionResult run_mock(const OutcomeMap& script, const fs::path& log_path, bool timed_out) {
  ExecutionResult result;
  result.backend = BackendKind::Mock;
  result.raw_log_path = log_path;
  result.parse_route = "mock";
  std::string log;
  if (timed_out) {
    log = "mock: timeout\n";
    result.failure = "timeout";
    result.parse_route = "timeout";
    result.exit_status = -1;
  } else {
    result.per_test = script;
    for (const auto& [method, outcome] : script) {
      log += "mock: " + method + " " + std::string(to_string(outcome.status));
      if (!outcome.detail.empty()) log += ": " + outcome.detail;
      log += "\n";
      if (outcome.status != OutcomeStatus::Pass) result.exit_status = 1;
    }
  }
  write_log(log_path, log);
  return result;
}

}  // namespace scproof

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
#include "scproof/solc.hpp"

#include <deque>
#include <regex>
#include <set>

#include "scproof/error.hpp"
#include "scproof/process.hpp"
#include "scproof/text.hpp"

namespace scproof::solc {

bool Run::has_errors() const {
  for (const auto& d : diagnostics)
    if (d.severity == "error") return true;
  return false;
}

std::string Run::error_text() const {
  std::string out;
  for (const auto& d : diagnostics) {
    if (d.severity != "error") continue;
    if (!out.empty()) out += '\n';
    out += d.message;
  }
  return out;
}

std::filesystem::path resolve_compiler(const std::string& solc_path) {
  auto found = find_executable(solc_path);
  if (!found) throw Error(ErrorCode::CompilerNotFound, "'" + solc_path + "' is not an executable on PATH");
  return *found;
}

Run run_standard_json(const std::filesystem::path& compiler, const nlohmann::json& input,
                      std::chrono::milliseconds timeout) {
  ProcessSpec spec;
  spec.executable = compiler;
  spec.args = {"--standard-json"};
  spec.stdin_data = input.dump();
  spec.timeout = timeout;
  spec.merge_stderr = false;
  const text::TempFile out_file("solc-out");
  spec.stdout_file = out_file.path;
  ProcessResult proc;
  try {
    proc = run_process(spec);
  } catch (const Error& e) {
    throw Error(ErrorCode::CompilerNotFound, e.detail());
  }
  if (proc.timed_out) throw Error(ErrorCode::CompileFailed, "compiler timed out");

  // solcjs prints a banner line before the JSON document.
  auto brace = proc.out.find('{');
  if (brace == std::string::npos)
    throw Error(ErrorCode::CompileFailed, "compiler produced no JSON output: " + proc.out + proc.err);
  Run run;
  run.raw = std::string(text::trim(std::string_view(proc.out).substr(brace)));
  try {
    run.output = nlohmann::json::parse(run.raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::CompileFailed, std::string("unparseable compiler output: ") + e.what());
  }
  if (auto it = run.output.find("errors"); it != run.output.end() && it->is_array()) {
    for (const auto& e : *it) {
      Diagnostic d;
      d.severity = e.value("severity", "error");
      d.error_code = e.value("errorCode", "");
      d.message = e.value("formattedMessage", e.value("message", ""));
      run.diagnostics.push_back(std::move(d));
    }
  }
  return run;
}

std::map<std::string, std::string> collect_sources(const std::filesystem::path& root, const std::string& entry_key,
                                                   const std::vector<std::pair<std::string, std::string>>& remappings,
                                                   std::vector<std::string>* missing) {
  static const std::regex kImport(R"(import\s+(?:[^'";]*?\bfrom\s+)?["']([^"']+)["'])");
  std::map<std::string, std::string> sources;
  std::set<std::string> seen;
  std::deque<std::string> queue{std::filesystem::path(entry_key).lexically_normal().generic_string()};
  while (!queue.empty()) {
    std::string key = queue.front();
    queue.pop_front();
    if (!seen.insert(key).second) continue;
    std::error_code ec;
    auto full = root / key;
    if (!std::filesystem::is_regular_file(full, ec)) {
      if (missing) missing->push_back(key);
      continue;
    }
    std::string content = text::read_file(full);
    for (std::sregex_iterator it(content.begin(), content.end(), kImport), end; it != end; ++it) {
      std::string target = (*it)[1].str();
      std::string resolved;
      if (target.starts_with("./") || target.starts_with("../")) {
        resolved = (std::filesystem::path(key).parent_path() / target).lexically_normal().generic_string();
      } else {
        resolved = target;
        for (const auto& [prefix, replacement] : remappings) {
          if (target.starts_with(prefix)) {
            resolved = replacement + target.substr(prefix.size());
            break;
          }
        }
        resolved = std::filesystem::path(resolved).lexically_normal().generic_string();
      }
      queue.push_back(resolved);
    }
    sources.emplace(key, std::move(content));
  }
  return sources;
}

nlohmann::json make_input(const std::map<std::string, std::string>& sources,
                          const std::vector<std::pair<std::string, std::string>>& remappings) {
  nlohmann::json input;
  input["language"] = "Solidity";
  for (const auto& [key, content] : sources) input["sources"][key]["content"] = content;
  input["settings"]["outputSelection"]["*"][""] = nlohmann::json::array({"ast"});
  if (!remappings.empty()) {
    auto& list = input["settings"]["remappings"];
    list = nlohmann::json::array();
    for (const auto& [prefix, replacement] : remappings) list.push_back(prefix + "=" + replacement);
  }
  return input;
}

}  // namespace scproof::solc

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
#include "scproof/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "scproof/error.hpp"
#include "scproof/kv.hpp"
#include "scproof/text.hpp"

#ifndef SCPROOF_DATA_DIR
#define SCPROOF_DATA_DIR "."
#endif

namespace scproof {

namespace {

Error invalid(const std::string& key, const std::string& reason) {
  return Error(ErrorCode::ConfigInvalid, key + ": " + reason);
}

bool parse_bool(const std::string& key, const std::string& value) {
  const auto v = text::to_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw invalid(key, "expected true or false, got '" + value + "'");
}

int parse_positive(const std::string& key, const std::string& value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) throw invalid(key, "not an integer: '" + value + "'");
  if (out <= 0) throw invalid(key, "must be positive");
  return out;
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw invalid(key, "not a number: '" + value + "'");
  }
}

std::set<DefectKind> parse_defects(const std::string& key, const std::string& value) {
  std::set<DefectKind> out;
  for (const auto& item : kv::split_list(value)) {
    if (item == "all") return all_defect_kinds();
    auto k = parse_defect_kind(item);
    if (!k) throw invalid(key, "unknown defect kind '" + item + "'");
    out.insert(*k);
  }
  if (out.empty()) throw invalid(key, "no defect kinds");
  return out;
}

void apply(PipelineConfig& c, const std::string& key, const std::string& value) {
  if (key == "enabled_defects") c.enabled_defects = parse_defects(key, value);
  else if (key == "backend_mode" || key == "backend") {
    auto m = parse_backend_mode(value);
    if (!m) throw invalid(key, "expected auto, forge, kontrol or mock");
    c.backend_mode = *m;
  } else if (key == "offline") c.offline = parse_bool(key, value);
  else if (key == "allow_local_tools") c.allow_local_tools = parse_bool(key, value);
  else if (key == "solc_path") c.solc_path = value;
  else if (key == "forge_path") c.forge_path = value;
  else if (key == "kontrol_path") c.kontrol_path = value;
  else if (key == "workdir") c.workdir = value;
  else if (key == "fuzz_runs") c.fuzz_runs = parse_positive(key, value);
  else if (key == "job_cap") c.job_cap = parse_positive(key, value);
  else if (key == "template_dir") c.template_dir = value;
  else if (key == "stub_dir") c.stub_dir = value;
  else if (key == "forge_std_dir") c.forge_std_dir = value;
  else if (key == "kontrol_cheats_dir") c.kontrol_cheats_dir = value;
  else if (key == "mock_script") c.mock_script = value;
  else if (key == "compile_check") c.compile_check = parse_bool(key, value);
  else if (key == "force") c.force = parse_bool(key, value);
  else if (key == "verbosity") {
    c.verbosity = 0;
    if (value != "0") c.verbosity = parse_positive(key, value);
  } else if (key == "backend_timeout") c.backend_timeout = std::chrono::seconds(parse_positive(key, value));
  else if (key == "llm.endpoint_url") c.llm.endpoint_url = value;
  else if (key == "llm.model_id") c.llm.model_id = value;
  else if (key == "llm.api_key_env_name") c.llm.api_key_env_name = value;
  else if (key == "llm.temperature") {
    c.llm.temperature = parse_number(key, value);
    if (c.llm.temperature < 0.0 || c.llm.temperature > 2.0) throw invalid(key, "must lie in [0, 2]");
  } else if (key == "llm.max_output_tokens") c.llm.max_output_tokens = parse_positive(key, value);
  else if (key == "llm.request_timeout") c.llm.request_timeout = std::chrono::seconds(parse_positive(key, value));
  else if (key == "llm.max_in_flight") c.llm.max_in_flight = std::min(64, parse_positive(key, value));
  else if (key == "llm.mode") {
    auto m = parse_llm_mode(value);
    if (!m) throw invalid(key, "expected live, offline_stub or disabled");
    c.llm.mode = *m;
  } else {
    throw invalid(key, "unknown key");
  }
}

}  // namespace

std::string_view to_string(BackendMode mode) {
  switch (mode) {
    case BackendMode::Auto: return "auto";
    case BackendMode::Forge: return "forge";
    case BackendMode::Kontrol: return "kontrol";
    case BackendMode::Mock: return "mock";
  }
  return "auto";
}

std::optional<BackendMode> parse_backend_mode(std::string_view text) {
  for (auto m : {BackendMode::Auto, BackendMode::Forge, BackendMode::Kontrol, BackendMode::Mock})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "enabled_defects",  "backend_mode",       "offline",        "allow_local_tools", "solc_path",
      "forge_path",       "kontrol_path",       "workdir",        "fuzz_runs",         "job_cap",
      "template_dir",     "stub_dir",           "forge_std_dir",  "kontrol_cheats_dir", "mock_script",
      "compile_check",    "force",              "verbosity",      "backend_timeout",   "llm.endpoint_url",
      "llm.model_id",     "llm.api_key_env_name", "llm.temperature", "llm.max_output_tokens",
      "llm.request_timeout", "llm.max_in_flight", "llm.mode"};
  return keys;
}

std::filesystem::path default_data_dir() { return SCPROOF_DATA_DIR; }

ConfigLayer read_config_file(const std::filesystem::path& path) {
  kv::Document doc;
  try {
    doc = kv::parse_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.detail());
  }
  ConfigLayer layer;
  for (const auto& [k, v] : doc.root.entries) layer[k] = v;
  for (const auto& section : doc.sections) {
    if (section.name != "llm" || section.repeated)
      throw invalid(path.generic_string(), "unknown section [" + section.name + "]");
    for (const auto& [k, v] : section.entries) layer["llm." + k] = v;
  }
  return layer;
}

ConfigLayer config_from_env(const std::map<std::string, std::string>& env) {
  ConfigLayer layer;
  for (const auto& key : config_keys()) {
    std::string name = "SCPROOF_";
    for (char c : key) name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (auto it = env.find(name); it != env.end()) layer[key] = it->second;
  }
  return layer;
}

PipelineConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigLayer& overrides,
                           const std::map<std::string, std::string>& env) {
  ConfigLayer merged;
  if (file) merged = read_config_file(*file);
  for (const auto& [k, v] : config_from_env(env)) merged[k] = v;
  for (const auto& [k, v] : overrides) merged[k] = v;
  if (merged.contains("backend")) {
    merged["backend_mode"] = merged["backend"];
    merged.erase("backend");
  }

  PipelineConfig c;
  const auto data = default_data_dir();
  c.template_dir = data / "templates";
  c.forge_std_dir = data / "support" / "forge-std";
  c.kontrol_cheats_dir = data / "support" / "kontrol-cheatcodes";
  c.llm.mode = LlmMode::Live;
  for (const auto& [k, v] : merged) apply(c, k, v);

  if (c.offline) {
    const bool mode_set = merged.contains("llm.mode");
    if (c.llm.mode == LlmMode::Live) {
      if (mode_set) throw invalid("llm.mode", "live is not allowed offline");
      c.llm.mode = c.stub_dir.empty() ? LlmMode::Disabled : LlmMode::OfflineStub;
    }
    if (c.backend_mode == BackendMode::Auto) c.backend_mode = BackendMode::Mock;
    if ((c.backend_mode == BackendMode::Forge || c.backend_mode == BackendMode::Kontrol) && !c.allow_local_tools)
      throw invalid("backend_mode", std::string(to_string(c.backend_mode)) + " needs allow_local_tools when offline");
  }
  if (c.llm.mode == LlmMode::OfflineStub && c.stub_dir.empty()) throw invalid("stub_dir", "required by offline_stub");
  c.llm.stub_dir = c.stub_dir;
  return c;
}

std::string describe(const PipelineConfig& c) {
  std::string defects;
  for (auto k : c.enabled_defects) defects += (defects.empty() ? "" : ",") + std::string(to_string(k));
  std::string out;
  auto put = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  put("enabled_defects", defects);
  put("backend_mode", std::string(to_string(c.backend_mode)));
  put("offline", c.offline ? "true" : "false");
  put("allow_local_tools", c.allow_local_tools ? "true" : "false");
  put("solc_path", c.solc_path);
  put("forge_path", c.forge_path);
  put("kontrol_path", c.kontrol_path);
  put("workdir", c.workdir.generic_string());
  put("fuzz_runs", std::to_string(c.fuzz_runs));
  put("job_cap", std::to_string(c.job_cap));
  put("template_dir", c.template_dir.generic_string());
  put("stub_dir", c.stub_dir.generic_string());
  put("forge_std_dir", c.forge_std_dir.generic_string());
  put("kontrol_cheats_dir", c.kontrol_cheats_dir.generic_string());
  put("mock_script", c.mock_script.generic_string());
  put("compile_check", c.compile_check ? "true" : "false");
  put("backend_timeout", std::to_string(c.backend_timeout.count()));
  out += "\n[llm]\n";
  put("endpoint_url", c.llm.endpoint_url);
  put("model_id", c.llm.model_id);
  put("api_key_env_name", c.llm.api_key_env_name);
  put("temperature", std::to_string(c.llm.temperature));
  put("max_output_tokens", std::to_string(c.llm.max_output_tokens));
  put("request_timeout", std::to_string(c.llm.request_timeout.count()));
  put("max_in_flight", std::to_string(c.llm.max_in_flight));
  put("mode", std::string(to_string(c.llm.mode)));
  return out;
}

std::string config_digest(const PipelineConfig& c) {
  std::string canon;
  for (auto k : c.enabled_defects) canon += std::string(to_string(k)) + ",";
  canon += "\nbackend_mode=" + std::string(to_string(c.backend_mode));
  canon += "\noffline=" + std::to_string(c.offline);
  canon += "\nallow_local_tools=" + std::to_string(c.allow_local_tools);
  canon += "\nfuzz_runs=" + std::to_string(c.fuzz_runs);
  canon += "\ncompile_check=" + std::to_string(c.compile_check);
  canon += "\nbackend_timeout=" + std::to_string(c.backend_timeout.count());
  canon += "\nllm.endpoint_url=" + c.llm.endpoint_url;
  canon += "\nllm.model_id=" + c.llm.model_id;
  canon += "\nllm.temperature=" + std::to_string(c.llm.temperature);
  canon += "\nllm.max_output_tokens=" + std::to_string(c.llm.max_output_tokens);
  canon += "\nllm.request_timeout=" + std::to_string(c.llm.request_timeout.count());
  canon += "\nllm.mode=" + std::string(to_string(c.llm.mode));
  return "sha256:" + text::sha256_hex(canon);
}

}  // namespace scproof

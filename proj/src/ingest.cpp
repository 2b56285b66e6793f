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
#include "scproof/ingest.hpp"

#include <regex>

#include "scproof/error.hpp"
#include "scproof/solc.hpp"
#include "scproof/text.hpp"

namespace scproof {

namespace {

std::string version_from_ast(const nlohmann::json& root) {
  const auto nodes = root.find("nodes");
  if (nodes == root.end() || !nodes->is_array()) return {};
  for (const auto& node : *nodes) {
    if (node.value("nodeType", "") != "PragmaDirective") continue;
    const auto& lits = node.value("literals", nlohmann::json::array());
    if (lits.empty() || lits[0] != "solidity") continue;
    std::string joined;
    for (std::size_t i = 1; i < lits.size(); ++i) joined += lits[i].get<std::string>();
    if (!joined.empty() && (joined[0] == '=')) joined.erase(0, 1);
    if (std::regex_match(joined, std::regex(R"(\d+\.\d+\.\d+)"))) return joined;
  }
  return {};
}

struct Located {
  std::string key;
  const nlohmann::json* ast = nullptr;
};

Located locate_ast(const nlohmann::json& doc, const std::optional<std::string>& wanted) {
  auto sources = doc.find("sources");
  if (sources == doc.end() || !sources->is_object() || sources->empty())
    throw Error(ErrorCode::MalformedAst, "sources");
  std::string key;
  if (wanted && sources->contains(*wanted)) {
    key = *wanted;
  } else if (sources->size() == 1) {
    key = sources->begin().key();
  } else {
    for (auto it = sources->begin(); it != sources->end(); ++it) {
      if (it->is_object() && it->value("id", -1) == 0) key = it.key();
    }
    if (key.empty()) throw Error(ErrorCode::MalformedAst, "sources.<id 0>");
  }
  const auto& entry = (*sources)[key];
  const std::string base = "sources." + key;
  if (!entry.is_object() || !entry.contains("ast") || !entry["ast"].is_object())
    throw Error(ErrorCode::MalformedAst, base + ".ast");
  const auto& ast = entry["ast"];
  if (!ast.contains("nodeType") || !ast["nodeType"].is_string())
    throw Error(ErrorCode::MalformedAst, base + ".ast.nodeType");
  if (ast["nodeType"] != "SourceUnit") throw Error(ErrorCode::MalformedAst, base + ".ast.nodeType != SourceUnit");
  if (!ast.contains("nodes") || !ast["nodes"].is_array()) throw Error(ErrorCode::MalformedAst, base + ".ast.nodes");
  return {key, &ast};
}

}  // namespace

std::string pragma_version(const std::string& source) {
  static const std::regex kPragma(R"(pragma\s+solidity\s+=?\s*(\d+\.\d+\.\d+)\s*;)");
  std::smatch m;
  if (std::regex_search(source, m, kPragma)) return m[1].str();
  return {};
}

SourceUnit source_unit_from_standard_json(const std::string& standard_json, const std::string& raw_source,
                                          const std::filesystem::path& source_path,
                                          const std::optional<std::string>& source_key) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(standard_json);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::MalformedAst, "$");
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedAst, "$");
  auto located = locate_ast(doc, source_key);

  SourceUnit unit;
  unit.path = source_path;
  unit.ast_root = *located.ast;
  unit.raw_source = raw_source;
  unit.standard_json = standard_json;
  unit.solidity_version = pragma_version(raw_source);
  if (unit.solidity_version.empty()) unit.solidity_version = version_from_ast(unit.ast_root);
  if (auto errs = doc.find("errors"); errs != doc.end() && errs->is_array()) {
    for (const auto& e : *errs)
      if (e.value("severity", "") == "warning") unit.warnings.push_back(e.value("formattedMessage", e.value("message", "")));
  }
  return unit;
}

SourceUnit compile_to_ast(const std::filesystem::path& source_path, const CompileOptions& options) {
  auto compiler = solc::resolve_compiler(options.solc_path);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(source_path, ec))
    throw Error(ErrorCode::SourceNotFound, source_path.string());
  std::string raw = text::read_file(source_path);
  if (text::trim(raw).empty()) throw Error(ErrorCode::CompileFailed, source_path.string() + ": empty file, no source unit");

  const std::string pinned = pragma_version(raw);
  if (options.version_hint && !pinned.empty() && *options.version_hint != pinned)
    throw Error(ErrorCode::VersionMismatch,
                source_path.string() + " pins " + pinned + ", expected " + *options.version_hint);

  const std::string key = source_path.filename().generic_string();
  auto sources = solc::collect_sources(source_path.parent_path().empty() ? "." : source_path.parent_path(), key, {});
  auto run = solc::run_standard_json(compiler, solc::make_input(sources), options.timeout);
  if (run.has_errors()) {
    for (const auto& d : run.diagnostics) {
      if (d.severity == "error" && d.message.find("requires different compiler version") != std::string::npos)
        throw Error(ErrorCode::VersionMismatch, d.message);
    }
    throw Error(ErrorCode::CompileFailed, run.error_text());
  }
  try {
    return source_unit_from_standard_json(run.raw, raw, source_path, key);
  } catch (const Error& e) {
    throw Error(ErrorCode::CompileFailed, "compiler output lacks an AST: " + e.detail());
  }
}

SourceUnit load_ast_snapshot(const std::filesystem::path& json_path,
                             const std::optional<std::filesystem::path>& source_path) {
  const std::string text = text::read_file(json_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::MalformedAst, "$");
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedAst, "$");
  auto located = locate_ast(doc, std::nullopt);

  std::filesystem::path source;
  if (source_path) {
    source = *source_path;
  } else {
    const std::string abs = located.ast->value("absolutePath", located.key);
    const auto dir = json_path.parent_path();
    for (const auto& candidate : {dir / abs, dir / ".." / abs, std::filesystem::path(abs)}) {
      std::error_code ec;
      if (std::filesystem::is_regular_file(candidate, ec)) {
        source = candidate.lexically_normal();
        break;
      }
    }
  }
  std::error_code ec;
  if (source.empty() || !std::filesystem::is_regular_file(source, ec))
    throw Error(ErrorCode::SourceNotFound, "no Solidity source found for snapshot " + json_path.string());
  return source_unit_from_standard_json(text, text::read_file(source), source, located.key);
}

}  // namespace scproof

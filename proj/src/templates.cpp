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
#include "scproof/templates.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "scproof/error.hpp"
#include "scproof/kv.hpp"
#include "scproof/solc.hpp"
#include "scproof/text.hpp"

namespace scproof {

namespace {

const std::set<std::string, std::less<>> kDeterministicRules = {
    "import_path", "test_contract_name", "contract_type", "constructor_args", "constructor_funding", "target_call"};

// Names the templates declare themselves; a contract with one of these names
// would shadow or clash with them.
const std::set<std::string, std::less<>> kReservedNames = {"Test", "Vm", "stdError", "Attacker", "KontrolCheats"};

// Vendored libraries (forge-std, kontrol-cheatcodes) live under lib/ of the
// generated project, one level above test/.
const std::regex& lib_import() {
  static const std::regex re(R"RE("[^"]*lib/([A-Za-z0-9_-]+)/src/)RE");
  return re;
}

bool is_comment_line(std::string_view line) { return text::trim(line).starts_with("//"); }

std::string strip_location(std::string type) {
  for (std::string_view loc : {" memory", " calldata", " storage"}) {
    if (type.ends_with(loc)) type.erase(type.size() - loc.size());
  }
  return type;
}

std::string param_name(const Param& param, std::size_t position) {
  return param.name.empty() ? "arg" + std::to_string(position) : param.name;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) {
    if (!out.empty()) out += ", ";
    out += a;
  }
  return out;
}

std::string regex_escape(std::string_view s) {
  static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
  return std::regex_replace(std::string(s), special, R"(\$&)");
}

void check_contract_name(const std::string& name) {
  if (!text::is_identifier(name)) throw Error(ErrorCode::InvalidIdentifier, "'" + name + "' is not an identifier");
  if (name != kPlaceholder && name.starts_with(kPlaceholder))
    throw Error(ErrorCode::InvalidIdentifier, "'" + name + "' collides with the template placeholder");
  if (kReservedNames.contains(name))
    throw Error(ErrorCode::InvalidIdentifier, "'" + name + "' clashes with a name the template declares");
}

/// Applies the deterministic rules named in `rules` to `source`, skipping
/// comment lines so anchors stay byte-identical.
std::string apply_rules(const std::string& source, const std::set<std::string>& rules, const TestSuiteSpec& spec,
                        const std::string& funding_anchor) {
  const std::string& name = spec.contract_name;
  const std::regex test_name_re("\\b" + std::string(kPlaceholder) + "Test\\b");
  const std::regex type_re("\\b" + std::string(kPlaceholder) + "\\b");
  const std::regex contract_import_re("^(\\s*import\\s*\\{\\s*(?:" + regex_escape(name) + "|" +
                                      std::string(kPlaceholder) + ")\\s*\\}\\s*from\\s*)\"[^\"]*\"");
  const std::regex ctor_re("\\bnew\\s+" + regex_escape(name) + "\\s*\\(\\s*\\)");
  const std::regex target_re("\\b" + std::string(kTargetPlaceholder) + "\\s*\\(\\s*\\)");

  std::string ctor_replacement;
  if (!spec.constructor_args.empty() || spec.constructor_payable) {
    ctor_replacement = "new " + name + (spec.constructor_payable ? "{value: 1 ether}" : "") + "(" +
                       join_args(spec.constructor_args) + ")";
  }
  const std::string target_replacement =
      spec.target_function.empty() ? std::string(kUnresolvedPrefix) + "target()"
                                   : spec.target_function + "(" + join_args(spec.target_args) + ")";

  std::vector<std::string> lines;
  for (auto line : text::split_lines(source)) lines.emplace_back(line);
  const bool trailing_newline = !source.empty() && source.back() == '\n';
  if (trailing_newline && !lines.empty() && lines.back().empty()) lines.pop_back();

  std::vector<std::string> out;
  out.reserve(lines.size() + 1);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!is_comment_line(line)) {
      if (rules.contains("test_contract_name")) line = std::regex_replace(line, test_name_re, name + "Test");
      if (rules.contains("contract_type")) line = std::regex_replace(line, type_re, name);
      if (rules.contains("import_path") && text::trim(line).starts_with("import")) {
        line = std::regex_replace(line, lib_import(), "\"../lib/$1/src/");
        line = std::regex_replace(line, contract_import_re, "$1\"" + spec.import_path + "\"");
      }
      if (rules.contains("constructor_args") && !ctor_replacement.empty())
        line = std::regex_replace(line, ctor_re, ctor_replacement);
      if (rules.contains("target_call")) line = std::regex_replace(line, target_re, target_replacement);
    }
    out.push_back(std::move(line));
    if (rules.contains("constructor_funding") && spec.constructor_payable && !funding_anchor.empty() &&
        text::trim(lines[i]) == funding_anchor) {
      const std::string indent = lines[i].substr(0, lines[i].find_first_not_of(" \t"));
      const std::string deal = indent + "vm.deal(address(this), 1 ether);";
      const bool present = i + 1 < lines.size() && text::trim(lines[i + 1]) == text::trim(deal);
      if (!present) out.push_back(deal);
    }
  }
  std::string result;
  for (std::size_t i = 0; i < out.size(); ++i) {
    result += out[i];
    if (i + 1 < out.size() || trailing_newline) result += '\n';
  }
  return result;
}

std::set<std::string> deterministic_rules(const TestTemplate& tmpl) {
  std::set<std::string> rules;
  for (const auto& slot : tmpl.slots)
    if (slot.mode == FillMode::Deterministic) rules.insert(slot.name);
  return rules;
}

std::string funding_anchor(const TestTemplate& tmpl) {
  for (const auto& slot : tmpl.slots)
    if (slot.name == "constructor_funding") return std::string(text::trim(slot.anchor));
  return {};
}

bool contains_line(std::string_view source, std::string_view anchor) {
  const auto wanted = text::trim(anchor);
  for (auto line : text::split_lines(source))
    if (text::trim(line) == wanted) return true;
  return false;
}

std::string render_evidence(const DefectEvidence& ev) {
  std::string out;
  for (const auto& site : ev.sites) {
    out += "- " + site.function + ": " + (site.detail.empty() ? site.tag : site.detail) + " (line " +
           std::to_string(site.location.line) + ", " + site.tag + ")\n";
  }
  for (const auto& [key, value] : ev.gating_facts) out += "- fact " + key + " = " + value + "\n";
  return out;
}

}  // namespace

std::string_view to_string(FillMode mode) { return mode == FillMode::Llm ? "llm" : "deterministic"; }

std::string_view to_string(BackendPreference pref) {
  switch (pref) {
    case BackendPreference::Forge: return "forge";
    case BackendPreference::Kontrol: return "kontrol";
    case BackendPreference::Either: return "either";
  }
  return "forge";
}

bool TestTemplate::has_llm_slots() const {
  return std::any_of(slots.begin(), slots.end(), [](const SlotSpec& s) { return s.mode == FillMode::Llm; });
}

std::map<std::string, std::string> TestTemplate::roles() const {
  std::map<std::string, std::string> out;
  for (const auto& m : expected_test_methods) out[m.name] = m.role;
  return out;
}

TestTemplate load_template(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest";
  const std::string origin = manifest_path.generic_string();
  auto invalid = [&](const std::string& why) { return Error(ErrorCode::TemplateInvalid, origin + ": " + why); };

  kv::Document doc;
  try {
    doc = kv::parse_file(manifest_path);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::KvSyntax) throw invalid(e.detail());
    throw;
  }
  TestTemplate t;
  t.dir = dir;
  auto require = [&](const kv::Section& s, const char* key) {
    auto v = s.get(key);
    if (!v || v->empty()) throw invalid(std::string("missing '") + key + "'");
    return *v;
  };
  t.template_id = require(doc.root, "template_id");
  auto kind = parse_defect_kind(require(doc.root, "defect_kind"));
  if (!kind) throw invalid("unknown defect_kind");
  t.defect_kind = *kind;
  t.description = doc.root.get_or("description", "");
  t.verdict_table_id = require(doc.root, "verdict_table");
  const std::string backend = require(doc.root, "backend");
  if (backend == "forge") t.backend_preference = BackendPreference::Forge;
  else if (backend == "kontrol") t.backend_preference = BackendPreference::Kontrol;
  else if (backend == "either") t.backend_preference = BackendPreference::Either;
  else throw invalid("unknown backend '" + backend + "'");

  const auto source_path = dir / require(doc.root, "source");
  try {
    t.source_text = text::read_file(source_path);
  } catch (const Error&) {
    throw invalid("cannot read " + source_path.generic_string());
  }

  std::set<std::string> slot_names;
  for (const auto* g : doc.groups("slot")) {
    SlotSpec slot;
    slot.name = require(*g, "name");
    const std::string mode = require(*g, "mode");
    if (mode == "deterministic") slot.mode = FillMode::Deterministic;
    else if (mode == "llm") slot.mode = FillMode::Llm;
    else throw invalid("slot " + slot.name + ": unknown mode '" + mode + "'");
    slot.anchor = require(*g, "anchor");
    slot.description = g->get_or("description", "");
    if (!slot_names.insert(slot.name).second) throw invalid("duplicate slot " + slot.name);
    if (slot.mode == FillMode::Deterministic && !kDeterministicRules.contains(slot.name))
      throw invalid("deterministic slot " + slot.name + " has no substitution rule");
    if (!contains_line(t.source_text, slot.anchor)) throw invalid("anchor of slot " + slot.name + " not in source");
    t.slots.push_back(std::move(slot));
  }
  for (const auto* g : doc.groups("method")) {
    ExpectedMethod m{require(*g, "name"), require(*g, "role")};
    if (t.source_text.find("function " + m.name + "(") == std::string::npos)
      throw invalid("method " + m.name + " not in source");
    t.expected_test_methods.push_back(std::move(m));
  }
  if (t.expected_test_methods.empty()) throw invalid("no [[method]] entries");
  for (const auto* g : doc.groups("helper")) {
    HelperSpec h;
    h.source_file = require(*g, "source");
    h.target_file = require(*g, "target");
    try {
      h.source_text = text::read_file(dir / h.source_file);
    } catch (const Error&) {
      throw invalid("cannot read helper " + h.source_file);
    }
    t.helpers.push_back(std::move(h));
  }
  return t;
}

TemplateRegistry TemplateRegistry::load(const std::filesystem::path& root) {
  TemplateRegistry reg;
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec))
    throw Error(ErrorCode::TemplateInvalid, root.generic_string() + " is not a directory");
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(root))
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest")) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) reg.add(load_template(d));
  return reg;
}

void TemplateRegistry::add(TestTemplate t) {
  if (find(t.defect_kind))
    throw Error(ErrorCode::TemplateInvalid, "second template for " + std::string(to_string(t.defect_kind)));
  templates_.push_back(std::move(t));
}

const TestTemplate* TemplateRegistry::find(DefectKind kind) const {
  for (const auto& t : templates_)
    if (t.defect_kind == kind) return &t;
  return nullptr;
}

const TestTemplate& select_template(const TemplateRegistry& registry, const DefectEvidence& evidence) {
  const TestTemplate* t = registry.find(evidence.kind);
  if (!t) throw Error(ErrorCode::NoTemplateForKind, std::string(to_string(evidence.kind)));
  return *t;
}

bool TestSuiteSpec::has_unresolved() const {
  auto unresolved = [](const std::string& s) { return s.find(kUnresolvedPrefix) != std::string::npos; };
  return target_function.empty() || std::any_of(constructor_args.begin(), constructor_args.end(), unresolved) ||
         std::any_of(target_args.begin(), target_args.end(), unresolved);
}

std::string zero_value(const Param& param, std::size_t position) {
  const std::string name = param_name(param, position);
  const std::string type = strip_location(param.type);
  static const std::regex int_re(R"(u?int\d*)");
  static const std::regex bytes_n_re(R"(bytes\d+)");
  static const std::regex dyn_array_re(R"((.+)\[\])");
  std::smatch m;
  if (std::regex_match(type, int_re)) return "0";
  if (type == "bool") return "false";
  if (type == "address") return "makeAddr(\"" + name + "\")";
  if (type == "address payable") return "payable(makeAddr(\"" + name + "\"))";
  if (std::regex_match(type, bytes_n_re)) return type + "(0)";
  if (type == "string" || type == "bytes") return "\"\"";
  if (type.starts_with("contract ") || type.starts_with("interface ")) {
    const std::string contract = type.substr(type.find(' ') + 1);
    return contract + "(payable(makeAddr(\"" + name + "\")))";
  }
  if (type.starts_with("enum ")) return type.substr(5) + "(0)";
  if (std::regex_match(type, m, dyn_array_re) && m[1].str().find('[') == std::string::npos)
    return "new " + m[1].str() + "[](0)";
  return std::string(kUnresolvedPrefix) + name;
}

TestSuiteSpec make_suite_spec(const TestTemplate& tmpl, const ContractIR& ir, const DefectEvidence& evidence) {
  check_contract_name(ir.name);
  TestSuiteSpec spec;
  spec.defect_kind = tmpl.defect_kind;
  spec.template_id = tmpl.template_id;
  spec.contract_name = ir.name;
  spec.import_path = "../src/" + ir.name + ".sol";
  spec.evidence = evidence;
  spec.constructor_payable = ir.constructor_payable;
  std::string signature = "constructor(";
  for (std::size_t i = 0; i < ir.constructor_params.size(); ++i) {
    const auto& p = ir.constructor_params[i];
    spec.constructor_args.push_back(zero_value(p, i));
    if (i) signature += ", ";
    signature += p.type + (p.name.empty() ? "" : " " + p.name);
  }
  spec.constructor_signature = signature + ")" + (ir.constructor_payable ? " payable" : "");
  for (const auto& h : tmpl.helpers) {
    auto stem = std::filesystem::path(h.target_file).stem().string();
    spec.helper_contracts_needed.push_back(stem);
  }

  // The first evidence site names the function the test must exercise.
  const FunctionIR* target = nullptr;
  if (!evidence.sites.empty()) {
    for (const auto& fn : ir.functions) {
      if (fn.name == evidence.sites.front().function && fn.kind == FunctionKind::Function) {
        target = &fn;
        break;
      }
    }
  }
  if (target) {
    spec.target_function = target->name;
    std::set<std::string> fuzzed;
    if (evidence.kind == DefectKind::InsufficientParamValidation) {
      // gating fact "parameters" lists function.param pairs
      for (const auto& item : kv::split_list(evidence.gating_facts.count("parameters") ? evidence.gating_facts.at("parameters") : "")) {
        auto dot = item.find('.');
        if (dot != std::string::npos && item.substr(0, dot) == target->name) fuzzed.insert(item.substr(dot + 1));
      }
    }
    static const std::regex uint_re(R"(uint(\d*))");
    for (std::size_t i = 0; i < target->params.size(); ++i) {
      const auto& p = target->params[i];
      std::smatch m;
      const std::string type = strip_location(p.type);
      if (fuzzed.contains(p.name) && std::regex_match(type, m, uint_re)) {
        const bool full_width = m[1].str().empty() || m[1].str() == "256";
        spec.target_args.push_back(full_width ? "value" : type + "(value)");
      } else {
        spec.target_args.push_back(zero_value(p, i));
      }
    }
  }
  return spec;
}

std::string fill_deterministic(const TestTemplate& tmpl, const TestSuiteSpec& spec) {
  check_contract_name(spec.contract_name);
  for (const auto& slot : tmpl.slots)
    if (!contains_line(tmpl.source_text, slot.anchor)) throw Error(ErrorCode::AnchorMissing, slot.name);
  return apply_rules(tmpl.source_text, deterministic_rules(tmpl), spec, funding_anchor(tmpl));
}

std::map<std::string, std::string> fill_helpers(const TestTemplate& tmpl, const TestSuiteSpec& spec) {
  check_contract_name(spec.contract_name);
  std::map<std::string, std::string> out;
  auto rules = deterministic_rules(tmpl);
  rules.erase("constructor_funding");
  rules.erase("constructor_args");
  // Helpers sit beside the test, so they share its import paths.
  rules.insert({"contract_type", "import_path"});
  for (const auto& h : tmpl.helpers) out[h.target_file] = apply_rules(h.source_text, rules, spec, "");
  return out;
}

PromptBundle build_prompt(const TestTemplate& tmpl, const TestSuiteSpec& spec, std::string_view contract_source,
                          std::string_view partially_filled) {
  PromptBundle b;
  b.defect_kind = std::string(to_string(spec.defect_kind));
  b.contract_name = spec.contract_name;
  b.system =
      "You complete Solidity test templates for the Foundry toolchain. The template's comments are "
      "instructions: follow them, keep every test method name and assertion unchanged, and keep the "
      "imports as given. Reply with exactly one Solidity code block, no prose.";

  std::string u;
  u += "## Defect\n";
  u += std::string(to_string(spec.defect_kind)) + ": " + tmpl.description + "\n\n";
  u += "## Contract under test (" + spec.contract_name + ")\n```solidity\n" + std::string(contract_source);
  if (!contract_source.empty() && contract_source.back() != '\n') u += '\n';
  u += "```\n\n";
  u += "## Evidence\n" + render_evidence(spec.evidence) + "\n";
  u += "## Constructor\n" + spec.constructor_signature + "\n\n";
  std::vector<const SlotSpec*> open;
  for (const auto& slot : tmpl.slots)
    if (slot.mode == FillMode::Llm) open.push_back(&slot);
  u += "## Template\n";
  if (open.empty()) {
    u += "Every slot is already filled. Return the template below unchanged as a single code block.\n";
  } else {
    u += "Complete the instructions marked by these comments, replacing the line that follows each one where it "
         "says so:\n";
    for (const auto* slot : open) u += "- `" + std::string(text::trim(slot->anchor)) + "`: " + slot->description + "\n";
    if (spec.defect_kind == DefectKind::AccessControl)
      u += "The caller parameter is symbolic: constrain the symbolic value so it excludes every address allowed to "
           "call the function.\n";
  }
  u += "```solidity\n" + std::string(partially_filled);
  if (!partially_filled.empty() && partially_filled.back() != '\n') u += '\n';
  u += "```\n";
  b.user = std::move(u);
  return b;
}

PromptBundle build_repair_prompt(const PromptBundle& original, std::string_view previous_code,
                                 const std::vector<std::string>& diagnostics) {
  PromptBundle b = original;
  b.user += "\n## Previous attempt\n```solidity\n" + std::string(previous_code);
  if (!previous_code.empty() && previous_code.back() != '\n') b.user += '\n';
  b.user += "```\n\n## Compiler diagnostics\n";
  for (const auto& d : diagnostics) b.user += d + "\n";
  b.user += "\nFix these problems and reply with the corrected file as one Solidity code block.\n";
  return b;
}

ExtractedCode extract_code(std::string_view reply) {
  ExtractedCode out;
  std::vector<std::string> blocks;
  std::string current;
  bool inside = false;
  for (auto line : text::split_lines(reply)) {
    if (text::trim(line).starts_with("```")) {
      if (inside) {
        blocks.push_back(std::move(current));
        current.clear();
      }
      inside = !inside;
      continue;
    }
    if (inside) {
      current += line;
      current += '\n';
    }
  }
  // An unterminated fence still counts: the model ran out of tokens.
  if (inside) blocks.push_back(std::move(current));

  if (blocks.empty()) {
    out.code = std::string(text::trim(reply));
    if (!out.code.empty()) out.code += '\n';
  } else {
    out.code = blocks.front();
    if (blocks.size() > 1)
      out.warnings.push_back("reply contained " + std::to_string(blocks.size()) + " code blocks; used the first");
  }
  if (text::trim(out.code).empty()) throw Error(ErrorCode::EmptyReply, "no code in reply");
  return out;
}

std::vector<std::string> structural_problems(std::string_view source, const TestTemplate& tmpl,
                                             const TestSuiteSpec& spec) {
  std::vector<std::string> problems;
  const std::string src(source);
  for (const auto& m : tmpl.expected_test_methods) {
    const std::regex decl("\\bfunction\\s+" + m.name + "\\s*\\(");
    if (!std::regex_search(src, decl)) problems.push_back("expected test method " + m.name + " is missing");
  }
  const std::regex contract_decl("\\bcontract\\s+" + regex_escape(spec.test_contract_name()) + "\\b");
  if (!std::regex_search(src, contract_decl))
    problems.push_back("test contract " + spec.test_contract_name() + " is not declared");

  int depth = 0;
  bool in_block_comment = false;
  for (auto line : text::split_lines(source)) {
    std::string code;
    bool in_string = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      const char next = i + 1 < line.size() ? line[i + 1] : '\0';
      if (in_block_comment) {
        if (c == '*' && next == '/') {
          in_block_comment = false;
          ++i;
        }
        continue;
      }
      if (in_string) {
        if (c == '\\') ++i;
        else if (c == quote) in_string = false;
        continue;
      }
      if (c == '/' && next == '/') break;
      if (c == '/' && next == '*') {
        in_block_comment = true;
        ++i;
        continue;
      }
      if (c == '"' || c == '\'') {
        in_string = true;
        quote = c;
        code += ' ';
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}') --depth;
      code += c;
    }
    if (depth < 0) break;
    if (spec.contract_name != kPlaceholder && std::regex_search(code, std::regex("\\b" + std::string(kPlaceholder))))
      problems.push_back("placeholder " + std::string(kPlaceholder) + " left in: " + std::string(text::trim(line)));
    if (code.find(kTargetPlaceholder) != std::string::npos)
      problems.push_back("placeholder " + std::string(kTargetPlaceholder) + " left in: " + std::string(text::trim(line)));
    if (code.find(kUnresolvedPrefix) != std::string::npos)
      problems.push_back("unresolved value in: " + std::string(text::trim(line)));
  }
  if (depth != 0) problems.push_back("unbalanced braces");
  return problems;
}

Validation validate_suite(std::string_view source, const std::filesystem::path& project_dir,
                          const TestTemplate& tmpl, const TestSuiteSpec& spec, const ValidationOptions& options) {
  Validation v;
  v.diagnostics = structural_problems(source, tmpl, spec);
  text::write_file(project_dir / spec.test_file(), source);
  if (options.compile) {
    const auto compiler = solc::resolve_compiler(options.solc_path);
    const std::vector<std::pair<std::string, std::string>> remappings = {
        {"forge-std/", "lib/forge-std/src/"}, {"kontrol-cheatcodes/", "lib/kontrol-cheatcodes/src/"}};
    std::vector<std::string> missing;
    auto sources = solc::collect_sources(project_dir, spec.test_file(), remappings, &missing);
    for (const auto& m : missing) v.diagnostics.push_back("import not found: " + m);
    auto run = solc::run_standard_json(compiler, solc::make_input(sources, remappings), options.timeout);
    for (const auto& d : run.diagnostics)
      if (d.severity == "error") v.diagnostics.push_back(std::string(text::trim(d.message)));
    v.compile_checked = true;
  }
  v.compiled_ok = v.diagnostics.empty();
  return v;
}

}  // namespace scproof

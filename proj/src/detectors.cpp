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
#include "scproof/detectors.hpp"

#include <algorithm>
#include <regex>

#include "scproof/error.hpp"
#include "scproof/text.hpp"

namespace scproof {

namespace {

constexpr std::array<std::pair<DefectKind, std::pair<std::string_view, std::string_view>>, 7> kNames = {{
    {DefectKind::Reentrancy, {"Reentrancy", "reentrancy"}},
    {DefectKind::ComplexFallback, {"ComplexFallback", "complex_fallback"}},
    {DefectKind::AccessControl, {"AccessControl", "access_control"}},
    {DefectKind::BlockEnvDependency, {"BlockEnvDependency", "block_env"}},
    {DefectKind::InsufficientParamValidation, {"InsufficientParamValidation", "param_validation"}},
    {DefectKind::FaultyAssertRevert, {"FaultyAssertRevert", "faulty_assert"}},
    {DefectKind::DivisionByZero, {"DivisionByZero", "division_by_zero"}},
}};

EvidenceSite site_at(const FunctionIR& fn, const StatementFact& st, std::string tag, std::string detail) {
  return {fn.name, st.index, st.src_location, std::move(tag), std::move(detail)};
}

std::string join(const std::set<std::string>& items, std::string_view sep = ",") {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

bool mentions_sender(const GuardFact& g) { return g.condition_mentions.contains("msg.sender"); }

std::optional<DefectEvidence> make(DefectKind kind, const ContractIR& ir, std::vector<EvidenceSite> sites,
                                   std::map<std::string, std::string> facts = {}) {
  if (sites.empty()) return std::nullopt;
  DefectEvidence ev;
  ev.kind = kind;
  ev.contract = ir.name;
  ev.sites = std::move(sites);
  ev.gating_facts = std::move(facts);
  return ev;
}

/// Ether/token gate for reentrancy; empty when the contract handles neither.
std::string value_gate(const ContractIR& ir) {
  for (const auto& fn : ir.functions)
    if (fn.is_payable && fn.kind != FunctionKind::Constructor) return "payable_entry";
  if (ir.has_payable_fallback) return "payable_entry";
  for (const auto& fn : ir.functions) {
    for (const auto& st : fn.body) {
      for (const auto& name : st.writes_state) {
        const StateVar* var = ir.find_state_var(name);
        if (var && var->is_address_keyed_mapping()) return "address_mapping_write";
      }
      for (const auto& call : st.external_calls)
        if (call.carries_value) return "value_call";
    }
  }
  return {};
}

std::string_view sensitive_tag(SensitiveUseKind kind) {
  switch (kind) {
    case SensitiveUseKind::DivisionDenominator: return "unvalidated-denominator";
    case SensitiveUseKind::ArrayIndex: return "unvalidated-index";
    case SensitiveUseKind::CallValue: return "unvalidated-call-value";
    case SensitiveUseKind::LoopBound: return "unvalidated-loop-bound";
  }
  return "unvalidated-input";
}

std::string_view sensitive_phrase(SensitiveUseKind kind) {
  switch (kind) {
    case SensitiveUseKind::DivisionDenominator: return "a division denominator";
    case SensitiveUseKind::ArrayIndex: return "an array index";
    case SensitiveUseKind::CallValue: return "the value of an external call";
    case SensitiveUseKind::LoopBound: return "a loop bound";
  }
  return "a sensitive use";
}

}  // namespace

std::string_view to_string(DefectKind kind) {
  for (const auto& [k, names] : kNames)
    if (k == kind) return names.first;
  return "?";
}

std::string_view dir_name(DefectKind kind) {
  for (const auto& [k, names] : kNames)
    if (k == kind) return names.second;
  return "?";
}

std::optional<DefectKind> parse_defect_kind(std::string_view text) {
  const std::string wanted = text::to_lower(text::trim(text));
  for (const auto& [k, names] : kNames)
    if (wanted == text::to_lower(names.first) || wanted == names.second) return k;
  return std::nullopt;
}

std::set<DefectKind> all_defect_kinds() { return {kAllDefectKinds.begin(), kAllDefectKinds.end()}; }

std::optional<DefectEvidence> detect_reentrancy(const ContractIR& ir) {
  const std::string gate = value_gate(ir);
  if (gate.empty()) return std::nullopt;

  std::vector<EvidenceSite> sites;
  bool all_capped = true;
  bool used_opaque = false;
  for (const auto& fn : ir.functions) {
    std::vector<EvidenceSite> fn_sites;
    std::set<std::uint32_t> write_sites;
    for (std::size_t i = 0; i < fn.body.size(); ++i) {
      const auto& st = fn.body[i];
      bool has_call = false;
      bool capped = true;
      for (const auto& call : st.external_calls) {
        if (call.mechanism == CallMechanism::Selfdestruct) continue;
        has_call = true;
        capped = capped && call.gas_capped_2300;
      }
      if (!has_call) continue;
      std::vector<std::uint32_t> later;
      for (std::size_t j = i + 1; j < fn.body.size(); ++j) {
        const auto& next = fn.body[j];
        if (!next.writes_state.empty() || next.opaque) {
          later.push_back(next.index);
          if (next.opaque && next.writes_state.empty()) used_opaque = true;
        }
      }
      if (later.empty()) continue;
      all_capped = all_capped && capped;
      fn_sites.push_back(site_at(fn, st, "external-call",
                              std::string(to_string(st.external_calls.front().mechanism)) + " in " + fn.name));
      for (auto idx : later) {
        if (!write_sites.insert(idx).second) continue;
        const auto& w = fn.body[idx];
        std::string detail = w.opaque && w.writes_state.empty() ? "opaque statement after external call"
                                                                 : "writes " + join(w.writes_state) + " after external call";
        fn_sites.push_back(site_at(fn, w, "state-write-after-call", std::move(detail)));
      }
    }
    std::stable_sort(fn_sites.begin(), fn_sites.end(), [](const EvidenceSite& a, const EvidenceSite& b) {
      return a.statement_index < b.statement_index;
    });
    sites.insert(sites.end(), fn_sites.begin(), fn_sites.end());
  }
  return make(DefectKind::Reentrancy, ir, std::move(sites),
              {{"all_calls_gas_capped", all_capped ? "true" : "false"},
               {"gate", gate},
               {"opaque", used_opaque ? "true" : "false"}});
}

std::optional<DefectEvidence> detect_complex_fallback(const ContractIR& ir) {
  const FunctionIR* callback = nullptr;
  for (const auto& fn : ir.functions)
    if (fn.kind == FunctionKind::Receive) callback = &fn;
  if (!callback) {
    for (const auto& fn : ir.functions)
      if (fn.kind == FunctionKind::Fallback && fn.is_payable) callback = &fn;
  }
  if (!callback) return std::nullopt;

  std::vector<EvidenceSite> sites;
  for (const auto& st : callback->body) {
    if (!st.writes_state.empty()) {
      sites.push_back(site_at(*callback, st, "expensive-statement", "writes " + join(st.writes_state)));
    } else if (!st.external_calls.empty()) {
      sites.push_back(site_at(*callback, st, "expensive-statement",
                              std::string(to_string(st.external_calls.front().mechanism)) + " call"));
    }
  }
  return make(DefectKind::ComplexFallback, ir, std::move(sites), {{"callback", std::string(to_string(callback->kind))}});
}

std::optional<DefectEvidence> detect_access_control(const ContractIR& ir, const DetectorOptions& options) {
  std::string pattern;
  for (const auto& name : options.owner_like_names) {
    if (!pattern.empty()) pattern += '|';
    pattern += name;
  }
  const std::regex owner_like(pattern.empty() ? "$^" : pattern, std::regex::icase);
  auto is_owner_like = [&](const std::string& name) {
    const StateVar* var = ir.find_state_var(name);
    return var && var->is_address() && std::regex_search(name, owner_like);
  };
  const bool critical_selfdestruct = options.critical_ops.contains("selfdestruct");
  const bool critical_delegatecall = options.critical_ops.contains("delegatecall");
  const bool critical_value = options.critical_ops.contains("value_transfer");
  const bool critical_owner = options.critical_ops.contains("owner_write");

  bool custom_modifiers = false;
  for (const auto& mod : ir.modifiers) custom_modifiers = custom_modifiers || mod.guards_sender();

  std::vector<EvidenceSite> sites;
  for (const auto& fn : ir.functions) {
    if (!fn.is_entry_point()) continue;
    if (std::any_of(fn.modifier_guards.begin(), fn.modifier_guards.end(), mentions_sender)) continue;
    bool guarded = false;
    for (const auto& st : fn.body) {
      if (std::any_of(st.guards.begin(), st.guards.end(), mentions_sender)) guarded = true;
      if (guarded) break;
      std::string op;
      for (const auto& call : st.external_calls) {
        if (call.mechanism == CallMechanism::Selfdestruct && critical_selfdestruct) op = "selfdestruct";
        else if (call.mechanism == CallMechanism::Delegatecall && critical_delegatecall) op = "delegatecall";
        // Paying msg.sender back is the normal withdraw pattern, not a privilege.
        else if (call.carries_value && !call.to_msg_sender && critical_value) op = "value transfer";
        if (!op.empty()) break;
      }
      if (op.empty() && critical_owner) {
        for (const auto& name : st.writes_state) {
          if (is_owner_like(name)) {
            op = "write to " + name;
            break;
          }
        }
      }
      if (!op.empty()) sites.push_back(site_at(fn, st, "unguarded-critical-op", op + " without msg.sender guard"));
    }
  }
  return make(DefectKind::AccessControl, ir, std::move(sites),
              {{"has_custom_access_modifiers", custom_modifiers ? "true" : "false"}});
}

std::optional<DefectEvidence> detect_block_env(const ContractIR& ir) {
  std::vector<EvidenceSite> sites;
  std::set<std::string> symbols;
  for (const auto& fn : ir.functions) {
    for (const auto& st : fn.body) {
      if (st.env_reads.empty()) continue;
      std::set<std::string> names;
      for (auto sym : st.env_reads) names.insert(std::string(to_string(sym)));
      symbols.insert(names.begin(), names.end());
      sites.push_back(site_at(fn, st, "env-read", "reads " + join(names)));
    }
  }
  return make(DefectKind::BlockEnvDependency, ir, std::move(sites), {{"symbols", join(symbols)}});
}

std::optional<DefectEvidence> detect_param_validation(const ContractIR& ir) {
  std::vector<EvidenceSite> sites;
  std::set<std::string> unvalidated;
  for (const auto& fn : ir.functions) {
    std::set<std::string> checked;
    for (const auto& g : fn.modifier_guards) checked.insert(g.condition_mentions.begin(), g.condition_mentions.end());
    for (const auto& st : fn.body) {
      std::set<std::pair<SensitiveUseKind, std::string>> seen;
      for (const auto& use : st.sensitive_uses) {
        if (checked.contains(use.parameter) || !seen.insert({use.kind, use.parameter}).second) continue;
        unvalidated.insert(fn.name + "." + use.parameter);
        sites.push_back(site_at(fn, st, std::string(sensitive_tag(use.kind)),
                                use.parameter + " flows into " + std::string(sensitive_phrase(use.kind)) +
                                    " without a prior check"));
      }
      // Guards only cover later statements.
      for (const auto& g : st.guards) checked.insert(g.condition_mentions.begin(), g.condition_mentions.end());
    }
  }
  return make(DefectKind::InsufficientParamValidation, ir, std::move(sites), {{"parameters", join(unvalidated)}});
}

std::optional<DefectEvidence> detect_faulty_assert(const ContractIR& ir) {
  std::vector<EvidenceSite> sites;
  for (const auto& fn : ir.functions) {
    std::set<std::string> params;
    for (const auto& p : fn.params) params.insert(p.name);
    for (const auto& st : fn.body) {
      for (const auto& g : st.guards) {
        if (g.is_constant_condition) {
          // For if-revert the condition is the failure case, so polarity flips.
          const bool passes = g.kind == GuardKind::IfRevert ? !*g.is_constant_condition : *g.is_constant_condition;
          sites.push_back(site_at(fn, st, passes ? "vacuous-guard" : "always-revert",
                                  std::string(to_string(g.kind)) + (passes ? " can never fail" : " always reverts")));
          continue;
        }
        if (g.kind != GuardKind::Assert) continue;
        std::string input;
        for (const auto& m : g.condition_mentions) {
          if (params.contains(m) || m.starts_with("msg.")) {
            input = m;
            break;
          }
        }
        if (!input.empty())
          sites.push_back(site_at(fn, st, "assert-on-input", "assert checks caller-controlled " + input));
      }
    }
  }
  return make(DefectKind::FaultyAssertRevert, ir, std::move(sites));
}

std::optional<DefectEvidence> detect_division_by_zero(const ContractIR& ir) {
  std::vector<EvidenceSite> sites;
  std::set<std::string> denominators;
  for (const auto& fn : ir.functions) {
    std::set<std::string> nonzero;
    for (const auto& g : fn.modifier_guards) nonzero.insert(g.nonzero_symbols.begin(), g.nonzero_symbols.end());
    for (const auto& st : fn.body) {
      for (const auto& a : st.arithmetic) {
        if (a.op == ArithOp::Other || a.denominator_kind == OperandKind::NonzeroLiteral) continue;
        if (a.denominator_symbol && nonzero.contains(*a.denominator_symbol)) continue;
        const std::string what = a.denominator_symbol ? *a.denominator_symbol : std::string(to_string(a.denominator_kind));
        denominators.insert(what);
        if (a.denominator_kind == OperandKind::ZeroLiteral) {
          sites.push_back(site_at(fn, st, "zero-denominator", "literal zero denominator"));
        } else {
          sites.push_back(site_at(fn, st, "unchecked-denominator",
                                  std::string(a.op == ArithOp::Div ? "division" : "modulo") + " by " + what +
                                      " with no nonzero check"));
        }
      }
      for (const auto& g : st.guards) nonzero.insert(g.nonzero_symbols.begin(), g.nonzero_symbols.end());
    }
  }
  return make(DefectKind::DivisionByZero, ir, std::move(sites), {{"denominators", join(denominators)}});
}

std::vector<DefectEvidence> run_detectors(const ContractIR& ir, const std::set<DefectKind>& enabled,
                                          const DetectorOptions& options) {
  std::vector<DefectEvidence> out;
  for (auto kind : kAllDefectKinds) {
    if (!enabled.contains(kind)) continue;
    std::optional<DefectEvidence> ev;
    switch (kind) {
      case DefectKind::Reentrancy: ev = detect_reentrancy(ir); break;
      case DefectKind::ComplexFallback: ev = detect_complex_fallback(ir); break;
      case DefectKind::AccessControl: ev = detect_access_control(ir, options); break;
      case DefectKind::BlockEnvDependency: ev = detect_block_env(ir); break;
      case DefectKind::InsufficientParamValidation: ev = detect_param_validation(ir); break;
      case DefectKind::FaultyAssertRevert: ev = detect_faulty_assert(ir); break;
      case DefectKind::DivisionByZero: ev = detect_division_by_zero(ir); break;
    }
    if (ev) out.push_back(std::move(*ev));
  }
  return out;
}

nlohmann::json to_json(const EvidenceSite& site) {
  return {{"function", site.function},
          {"statement_index", site.statement_index},
          {"location", to_json(site.location)},
          {"tag", site.tag},
          {"detail", site.detail}};
}

nlohmann::json to_json(const DefectEvidence& evidence) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : evidence.sites) sites.push_back(to_json(s));
  return {{"kind", to_string(evidence.kind)},
          {"contract", evidence.contract},
          {"sites", std::move(sites)},
          {"gating_facts", evidence.gating_facts},
          {"detector_version", evidence.detector_version}};
}

DefectEvidence evidence_from_json(const nlohmann::json& j) {
  try {
    DefectEvidence ev;
    auto kind = parse_defect_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::JsonMalformed, "evidence.kind");
    ev.kind = *kind;
    ev.contract = j.at("contract").get<std::string>();
    ev.gating_facts = j.at("gating_facts").get<std::map<std::string, std::string>>();
    ev.detector_version = j.at("detector_version").get<std::string>();
    for (const auto& s : j.at("sites")) {
      EvidenceSite site;
      site.function = s.at("function").get<std::string>();
      site.statement_index = s.at("statement_index").get<std::uint32_t>();
      site.tag = s.at("tag").get<std::string>();
      site.detail = s.value("detail", "");
      const auto& loc = s.at("location");
      site.location.file = loc.at("file").get<std::string>();
      site.location.line = loc.at("line").get<std::uint32_t>();
      site.location.column = loc.at("column").get<std::uint32_t>();
      site.location.start = loc.at("start").get<std::uint32_t>();
      site.location.length = loc.at("length").get<std::uint32_t>();
      ev.sites.push_back(std::move(site));
    }
    return ev;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::JsonMalformed, std::string("evidence: ") + e.what());
  }
}

}  // namespace scproof

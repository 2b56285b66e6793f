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
#include "scproof/ir.hpp"

namespace scproof {

std::string_view to_string(CallMechanism m) {
  switch (m) {
    case CallMechanism::LowLevelCall: return "low_level_call";
    case CallMechanism::Send: return "send";
    case CallMechanism::Transfer: return "transfer";
    case CallMechanism::ExternalFunctionCall: return "external_function_call";
    case CallMechanism::Delegatecall: return "delegatecall";
    case CallMechanism::Selfdestruct: return "selfdestruct";
  }
  return "?";
}

std::string_view to_string(GuardKind k) {
  switch (k) {
    case GuardKind::Require: return "require";
    case GuardKind::Assert: return "assert";
    case GuardKind::IfRevert: return "if_revert";
  }
  return "?";
}

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Div: return "div";
    case ArithOp::Mod: return "mod";
    case ArithOp::Other: return "other";
  }
  return "?";
}

std::string_view to_string(OperandKind k) {
  switch (k) {
    case OperandKind::NonzeroLiteral: return "nonzero_literal";
    case OperandKind::ZeroLiteral: return "zero_literal";
    case OperandKind::Parameter: return "parameter";
    case OperandKind::StateVar: return "state_var";
    case OperandKind::Expression: return "expression";
  }
  return "?";
}

std::string_view to_string(EnvSymbol s) {
  switch (s) {
    case EnvSymbol::BlockTimestamp: return "block_timestamp";
    case EnvSymbol::BlockNumber: return "block_number";
    case EnvSymbol::BlockPrevrandao: return "block_prevrandao";
    case EnvSymbol::BlockDifficulty: return "block_difficulty";
    case EnvSymbol::BlockCoinbase: return "block_coinbase";
    case EnvSymbol::BlockBasefee: return "block_basefee";
    case EnvSymbol::BlockhashCall: return "blockhash_call";
  }
  return "?";
}

std::string_view to_string(SensitiveUseKind k) {
  switch (k) {
    case SensitiveUseKind::DivisionDenominator: return "division_denominator";
    case SensitiveUseKind::ArrayIndex: return "array_index";
    case SensitiveUseKind::CallValue: return "call_value";
    case SensitiveUseKind::LoopBound: return "loop_bound";
  }
  return "?";
}

std::string_view to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::Function: return "function";
    case FunctionKind::Receive: return "receive";
    case FunctionKind::Fallback: return "fallback";
    case FunctionKind::Constructor: return "constructor";
  }
  return "?";
}

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::External: return "external";
    case Visibility::Public: return "public";
    case Visibility::Internal: return "internal";
    case Visibility::Private: return "private";
  }
  return "?";
}

std::string_view to_string(ContractKind k) {
  switch (k) {
    case ContractKind::Contract: return "contract";
    case ContractKind::Abstract: return "abstract";
    case ContractKind::Interface: return "interface";
    case ContractKind::Library: return "library";
  }
  return "?";
}

bool ModifierIR::guards_sender() const {
  for (const auto& g : guards)
    if (g.condition_mentions.contains("msg.sender")) return true;
  return false;
}

std::string FunctionIR::signature() const {
  std::string sig = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) sig += ",";
    sig += params[i].type;
  }
  return sig + ")";
}

const StateVar* ContractIR::find_state_var(std::string_view n) const {
  for (const auto& v : state_vars)
    if (v.name == n) return &v;
  return nullptr;
}

const FunctionIR* ContractIR::find_function(std::string_view n) const {
  for (const auto& f : functions)
    if (f.name == n) return &f;
  return nullptr;
}

const ModifierIR* ContractIR::find_modifier(std::string_view n) const {
  for (const auto& m : modifiers)
    if (m.name == n) return &m;
  return nullptr;
}

namespace {

template <typename T>
nlohmann::json string_set(const std::set<T>& values) {
  auto arr = nlohmann::json::array();
  for (const auto& v : values) {
    if constexpr (std::is_same_v<T, std::string>) {
      arr.push_back(v);
    } else {
      arr.push_back(std::string(to_string(v)));
    }
  }
  return arr;
}

nlohmann::json params_json(const std::vector<Param>& params) {
  auto arr = nlohmann::json::array();
  for (const auto& p : params) arr.push_back({{"name", p.name}, {"type", p.type}});
  return arr;
}

nlohmann::json guard_json(const GuardFact& g) {
  nlohmann::json j{{"kind", to_string(g.kind)},
                   {"condition_mentions", string_set(g.condition_mentions)},
                   {"nonzero_symbols", string_set(g.nonzero_symbols)},
                   {"from_modifier", g.from_modifier}};
  j["is_constant_condition"] = g.is_constant_condition ? nlohmann::json(*g.is_constant_condition) : nlohmann::json();
  return j;
}

}  // namespace

nlohmann::json to_json(const SrcLocation& loc) {
  return {{"file", loc.file}, {"line", loc.line}, {"column", loc.column}, {"start", loc.start}, {"length", loc.length}};
}

nlohmann::json to_json(const StatementFact& f) {
  nlohmann::json j{{"index", f.index},
                   {"src_location", to_json(f.src_location)},
                   {"node_type", f.node_type},
                   {"opaque", f.opaque},
                   {"reads_state", string_set(f.reads_state)},
                   {"writes_state", string_set(f.writes_state)},
                   {"env_reads", string_set(f.env_reads)}};
  auto calls = nlohmann::json::array();
  for (const auto& c : f.external_calls) {
    calls.push_back({{"mechanism", to_string(c.mechanism)},
                     {"carries_value", c.carries_value},
                     {"gas_capped_2300", c.gas_capped_2300},
                     {"to_msg_sender", c.to_msg_sender},
                     {"value_mentions", string_set(c.value_mentions)}});
  }
  j["external_calls"] = std::move(calls);
  auto guards = nlohmann::json::array();
  for (const auto& g : f.guards) guards.push_back(guard_json(g));
  j["guards"] = std::move(guards);
  auto arith = nlohmann::json::array();
  for (const auto& a : f.arithmetic) {
    nlohmann::json aj{{"op", to_string(a.op)}, {"denominator_kind", to_string(a.denominator_kind)}};
    aj["denominator_symbol"] = a.denominator_symbol ? nlohmann::json(*a.denominator_symbol) : nlohmann::json();
    arith.push_back(std::move(aj));
  }
  j["arithmetic"] = std::move(arith);
  auto uses = nlohmann::json::array();
  for (const auto& u : f.sensitive_uses) uses.push_back({{"kind", to_string(u.kind)}, {"parameter", u.parameter}});
  j["sensitive_uses"] = std::move(uses);
  return j;
}

nlohmann::json to_json(const FunctionIR& fn) {
  nlohmann::json j{{"name", fn.name},
                   {"kind", to_string(fn.kind)},
                   {"visibility", to_string(fn.visibility)},
                   {"is_payable", fn.is_payable},
                   {"state_mutability", fn.state_mutability},
                   {"modifiers_applied", fn.modifiers_applied},
                   {"params", params_json(fn.params)},
                   {"src_location", to_json(fn.src_location)},
                   {"inherited_from", fn.inherited_from}};
  auto body = nlohmann::json::array();
  for (const auto& s : fn.body) body.push_back(to_json(s));
  j["body"] = std::move(body);
  auto guards = nlohmann::json::array();
  for (const auto& g : fn.modifier_guards) guards.push_back(guard_json(g));
  j["modifier_guards"] = std::move(guards);
  return j;
}

nlohmann::json to_json(const ContractIR& ir) {
  nlohmann::json j{{"name", ir.name},
                   {"kind", to_string(ir.kind)},
                   {"source_path", ir.source_path},
                   {"has_receive", ir.has_receive},
                   {"has_payable_fallback", ir.has_payable_fallback},
                   {"constructor_params", params_json(ir.constructor_params)},
                   {"constructor_payable", ir.constructor_payable}};
  auto vars = nlohmann::json::array();
  for (const auto& v : ir.state_vars) vars.push_back({{"name", v.name}, {"type", v.type}, {"is_constant", v.is_constant}});
  j["state_vars"] = std::move(vars);
  auto fns = nlohmann::json::array();
  for (const auto& f : ir.functions) fns.push_back(to_json(f));
  j["functions"] = std::move(fns);
  auto mods = nlohmann::json::array();
  for (const auto& m : ir.modifiers) {
    auto guards = nlohmann::json::array();
    for (const auto& g : m.guards) guards.push_back(guard_json(g));
    mods.push_back({{"name", m.name}, {"params", params_json(m.params)}, {"guards", std::move(guards)}});
  }
  j["modifiers"] = std::move(mods);
  auto unsupported = nlohmann::json::array();
  for (const auto& u : ir.unsupported)
    unsupported.push_back({{"node_type", u.node_type}, {"location", to_json(u.location)}, {"reason", u.reason}});
  j["unsupported"] = std::move(unsupported);
  return j;
}

std::string canonical(const ContractIR& ir) { return to_json(ir).dump(); }

}  // namespace scproof

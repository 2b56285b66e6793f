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
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

// Normalized contract model consumed by the Stage 1 detectors.
namespace scproof {

/// One compiled (or snapshot-loaded) Solidity source file.
struct SourceUnit {
  std::filesystem::path path;
  std::string solidity_version;  // from the pragma, e.g. "0.8.29"
  nlohmann::json ast_root;       // compact AST, nodeType == "SourceUnit"
  std::string raw_source;
  /// The compiler's complete standard-JSON output, kept verbatim so it can
  /// be persisted as a snapshot.
  std::string standard_json;
  std::vector<std::string> warnings;
};

struct SrcLocation {
  std::string file;
  std::uint32_t line = 0;    // 1-based
  std::uint32_t column = 0;  // 1-based
  std::uint32_t start = 0;   // byte offset
  std::uint32_t length = 0;

  auto operator<=>(const SrcLocation&) const = default;
};

enum class CallMechanism { LowLevelCall, Send, Transfer, ExternalFunctionCall, Delegatecall, Selfdestruct };

struct ExternalCallFact {
  CallMechanism mechanism = CallMechanism::LowLevelCall;
  bool carries_value = false;
  bool gas_capped_2300 = false;
  /// Recipient is msg.sender (e.g. payable(msg.sender).transfer(x)).
  bool to_msg_sender = false;
  /// Identifiers mentioned by the value expression ({value: x} or transfer(x)).
  std::set<std::string> value_mentions;

  auto operator<=>(const ExternalCallFact&) const = default;
};

enum class GuardKind { Require, Assert, IfRevert };

struct GuardFact {
  GuardKind kind = GuardKind::Require;
  /// Identifiers, magic members ("msg.sender", "block.timestamp") and
  /// literal values found in the condition subtree.
  std::set<std::string> condition_mentions;
  std::optional<bool> is_constant_condition;
  /// Symbols this guard proves nonzero when execution continues past it
  /// (x != 0, x > 0, ... for require/assert; x == 0 for if-revert).
  std::set<std::string> nonzero_symbols;
  /// Name of the modifier the guard was inherited from, empty for body guards.
  std::string from_modifier;

  auto operator<=>(const GuardFact&) const = default;
};

enum class ArithOp { Div, Mod, Other };
enum class OperandKind { NonzeroLiteral, ZeroLiteral, Parameter, StateVar, Expression };

struct ArithFact {
  ArithOp op = ArithOp::Other;
  OperandKind denominator_kind = OperandKind::Expression;
  std::optional<std::string> denominator_symbol;

  auto operator<=>(const ArithFact&) const = default;
};

enum class EnvSymbol {
  BlockTimestamp,
  BlockNumber,
  BlockPrevrandao,
  BlockDifficulty,
  BlockCoinbase,
  BlockBasefee,
  BlockhashCall
};

/// A parameter flowing into a use the param-validation detector cares about.
enum class SensitiveUseKind { DivisionDenominator, ArrayIndex, CallValue, LoopBound };

struct SensitiveUse {
  SensitiveUseKind kind = SensitiveUseKind::CallValue;
  std::string parameter;

  auto operator<=>(const SensitiveUse&) const = default;
};

struct StatementFact {
  std::uint32_t index = 0;
  SrcLocation src_location;
  std::string node_type;
  bool opaque = false;
  std::set<std::string> reads_state;
  std::set<std::string> writes_state;
  std::vector<ExternalCallFact> external_calls;
  std::set<EnvSymbol> env_reads;
  std::vector<GuardFact> guards;
  std::vector<ArithFact> arithmetic;
  std::vector<SensitiveUse> sensitive_uses;

  bool operator==(const StatementFact&) const = default;
};

struct Param {
  std::string name;
  std::string type;

  auto operator<=>(const Param&) const = default;
};

struct StateVar {
  std::string name;
  std::string type;
  bool is_constant = false;

  bool is_address() const { return type == "address" || type == "address payable"; }
  bool is_address_keyed_mapping() const { return type.starts_with("mapping(address"); }
  auto operator<=>(const StateVar&) const = default;
};

enum class FunctionKind { Function, Receive, Fallback, Constructor };
enum class Visibility { External, Public, Internal, Private };

struct ModifierIR {
  std::string name;
  std::vector<Param> params;
  std::vector<GuardFact> guards;

  /// True when some guard condition mentions msg.sender.
  bool guards_sender() const;
  bool operator==(const ModifierIR&) const = default;
};

struct FunctionIR {
  std::string name;
  FunctionKind kind = FunctionKind::Function;
  Visibility visibility = Visibility::Public;
  bool is_payable = false;
  std::string state_mutability;
  std::vector<std::string> modifiers_applied;
  std::vector<Param> params;
  std::vector<StatementFact> body;
  /// Guards contributed by applied modifiers, with modifier parameters
  /// renamed to the invocation arguments where those are plain identifiers.
  std::vector<GuardFact> modifier_guards;
  SrcLocation src_location;
  std::string inherited_from;  // base contract name, empty when declared locally

  std::string signature() const;
  bool is_entry_point() const {
    return kind != FunctionKind::Constructor &&
           (visibility == Visibility::External || visibility == Visibility::Public);
  }
  bool operator==(const FunctionIR&) const = default;
};

enum class ContractKind { Contract, Abstract, Interface, Library };

struct UnsupportedConstruct {
  std::string node_type;
  SrcLocation location;
  std::string reason;

  bool operator==(const UnsupportedConstruct&) const = default;
};

struct ContractIR {
  std::string name;
  ContractKind kind = ContractKind::Contract;
  std::string source_path;
  std::vector<StateVar> state_vars;
  std::vector<FunctionIR> functions;
  std::vector<ModifierIR> modifiers;
  bool has_receive = false;
  bool has_payable_fallback = false;
  std::vector<Param> constructor_params;
  bool constructor_payable = false;
  std::vector<UnsupportedConstruct> unsupported;

  const StateVar* find_state_var(std::string_view name) const;
  const FunctionIR* find_function(std::string_view name) const;
  const ModifierIR* find_modifier(std::string_view name) const;
  bool operator==(const ContractIR&) const = default;
};

std::string_view to_string(CallMechanism m);
std::string_view to_string(GuardKind k);
std::string_view to_string(ArithOp op);
std::string_view to_string(OperandKind k);
std::string_view to_string(EnvSymbol s);
std::string_view to_string(SensitiveUseKind k);
std::string_view to_string(FunctionKind k);
std::string_view to_string(Visibility v);
std::string_view to_string(ContractKind k);

nlohmann::json to_json(const SrcLocation& loc);
nlohmann::json to_json(const StatementFact& fact);
nlohmann::json to_json(const FunctionIR& fn);
nlohmann::json to_json(const ContractIR& ir);

/// Canonical serialization: sorted keys, no whitespace. Equal IR gives
/// byte-identical output.
std::string canonical(const ContractIR& ir);

}  // namespace scproof

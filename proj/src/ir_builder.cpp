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
#include "scproof/ir_builder.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <unordered_map>

#include "scproof/error.hpp"
#include "scproof/text.hpp"

namespace scproof {

namespace {

using Json = nlohmann::json;

const Json kNull;

const Json& field(const Json& node, const char* key) {
  auto it = node.find(key);
  return it == node.end() ? kNull : *it;
}

std::string node_type(const Json& node) {
  return node.is_object() ? node.value("nodeType", "") : std::string();
}

std::string type_string(const Json& node) {
  const auto& td = field(node, "typeDescriptions");
  return td.is_object() && td.contains("typeString") && td["typeString"].is_string() ? td["typeString"].get<std::string>()
                                                                                     : std::string();
}

std::string type_identifier(const Json& node) {
  const auto& td = field(node, "typeDescriptions");
  return td.is_object() && td.contains("typeIdentifier") && td["typeIdentifier"].is_string()
             ? td["typeIdentifier"].get<std::string>()
             : std::string();
}

std::int64_t ref_id(const Json& node) {
  const auto& r = field(node, "referencedDeclaration");
  return r.is_number_integer() ? r.get<std::int64_t>() : INT64_MIN;
}

// Global builtins (require, msg, block, ...) reference ids counted down from
// 2^32; older compilers used small negative ids instead.
bool is_builtin_ref(std::int64_t id) { return id != INT64_MIN && (id < 0 || id >= 0xFFFFFF00LL); }

/// Byte offset -> (line, column) over the raw source.
class LineTable {
 public:
  LineTable(std::string_view source, std::string file) : size_(source.size()), file_(std::move(file)) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < source.size(); ++i)
      if (source[i] == '\n') starts_.push_back(i + 1);
  }

  SrcLocation locate(const Json& node) const {
    const auto& src = field(node, "src");
    if (!src.is_string()) throw Error(ErrorCode::MalformedAst, node_type(node) + ".src");
    const std::string s = src.get<std::string>();
    std::uint32_t start = 0;
    std::uint32_t length = 0;
    auto colon = s.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::MalformedAst, node_type(node) + ".src");
    auto r1 = std::from_chars(s.data(), s.data() + colon, start);
    auto r2 = std::from_chars(s.data() + colon + 1, s.data() + s.size(), length);
    if (r1.ec != std::errc() || r2.ec != std::errc()) throw Error(ErrorCode::MalformedAst, node_type(node) + ".src");
    if (static_cast<std::size_t>(start) + length > size_)
      throw Error(ErrorCode::MalformedAst, node_type(node) + ".src out of range (" + s + ")");
    auto it = std::upper_bound(starts_.begin(), starts_.end(), static_cast<std::size_t>(start));
    const auto line_index = static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
    SrcLocation loc;
    loc.file = file_;
    loc.line = static_cast<std::uint32_t>(line_index + 1);
    loc.column = static_cast<std::uint32_t>(start - starts_[line_index] + 1);
    loc.start = start;
    loc.length = length;
    return loc;
  }

 private:
  std::size_t size_;
  std::string file_;
  std::vector<std::size_t> starts_;
};

bool is_zero_literal(const std::string& value) {
  std::string digits;
  std::string_view v = value;
  if (v.starts_with("0x") || v.starts_with("0X")) v.remove_prefix(2);
  for (char c : v) {
    if (c == '_') continue;
    if (c == '.' || c == 'e' || c == 'E') break;
    digits.push_back(c);
  }
  if (digits.empty()) return false;
  return std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; });
}

std::optional<long long> small_literal(const Json& node) {
  if (node_type(node) != "Literal" || field(node, "kind") != "number") return std::nullopt;
  const std::string v = field(node, "value").is_string() ? field(node, "value").get<std::string>() : "";
  long long out = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) return std::nullopt;
  return out;
}

bool is_magic_base(const Json& node, std::string_view name) {
  if (node_type(node) != "Identifier" || field(node, "name") != name) return false;
  return is_builtin_ref(ref_id(node)) || type_identifier(node).starts_with("t_magic");
}

std::optional<EnvSymbol> env_member(std::string_view member) {
  if (member == "timestamp") return EnvSymbol::BlockTimestamp;
  if (member == "number") return EnvSymbol::BlockNumber;
  if (member == "prevrandao") return EnvSymbol::BlockPrevrandao;
  if (member == "difficulty") return EnvSymbol::BlockDifficulty;
  if (member == "coinbase") return EnvSymbol::BlockCoinbase;
  if (member == "basefee") return EnvSymbol::BlockBasefee;
  return std::nullopt;
}

/// Identifiers, magic members and literal values in an expression subtree.
void collect_mentions(const Json& node, std::set<std::string>& out) {
  if (node.is_array()) {
    for (const auto& child : node) collect_mentions(child, out);
    return;
  }
  if (!node.is_object()) return;
  const std::string type = node_type(node);
  if (type == "Identifier") {
    out.insert(field(node, "name").get<std::string>());
    return;
  }
  if (type == "MemberAccess") {
    const auto& base = field(node, "expression");
    for (const char* magic : {"msg", "block", "tx"}) {
      if (is_magic_base(base, magic)) {
        out.insert(std::string(magic) + "." + field(node, "memberName").get<std::string>());
        return;
      }
    }
    collect_mentions(base, out);
    return;
  }
  if (type == "Literal") {
    const auto& v = field(node, "value");
    if (v.is_string()) out.insert(v.get<std::string>());
    return;
  }
  if (type == "ElementaryTypeNameExpression") return;
  for (const auto& [key, child] : node.items()) {
    if (key == "typeDescriptions" || key == "argumentTypes") continue;
    if (child.is_object() || child.is_array()) collect_mentions(child, out);
  }
}

std::set<std::string> mentions_of(const Json& node) {
  std::set<std::string> out;
  collect_mentions(node, out);
  return out;
}

/// Unwraps parentheses and type conversions such as payable(x) / address(x).
const Json& strip_conversions(const Json& node) {
  const Json* cur = &node;
  while (true) {
    if (node_type(*cur) == "FunctionCall" && field(*cur, "kind") == "typeConversion" &&
        field(*cur, "arguments").is_array() && field(*cur, "arguments").size() == 1) {
      cur = &(*cur)["arguments"][0];
    } else if (node_type(*cur) == "TupleExpression" && field(*cur, "components").is_array() &&
               field(*cur, "components").size() == 1 && field(*cur, "isInlineArray") != true) {
      cur = &(*cur)["components"][0];
    } else {
      return *cur;
    }
  }
}

bool is_msg_sender(const Json& node) {
  const Json& inner = strip_conversions(node);
  return node_type(inner) == "MemberAccess" && field(inner, "memberName") == "sender" &&
         is_magic_base(field(inner, "expression"), "msg");
}

std::string identifier_name(const Json& node) {
  const Json& inner = strip_conversions(node);
  return node_type(inner) == "Identifier" ? field(inner, "name").get<std::string>() : std::string();
}

/// x != 0, x > 0, x >= 1 ... joined by && (require/assert semantics).
void nonzero_when_true(const Json& cond, std::set<std::string>& out) {
  if (node_type(cond) == "TupleExpression" && field(cond, "components").size() == 1) {
    nonzero_when_true(cond["components"][0], out);
    return;
  }
  if (node_type(cond) != "BinaryOperation") return;
  const std::string op = field(cond, "operator").get<std::string>();
  const Json& lhs = field(cond, "leftExpression");
  const Json& rhs = field(cond, "rightExpression");
  if (op == "&&") {
    nonzero_when_true(lhs, out);
    nonzero_when_true(rhs, out);
    return;
  }
  auto lit_l = small_literal(lhs);
  auto lit_r = small_literal(rhs);
  auto name_l = identifier_name(lhs);
  auto name_r = identifier_name(rhs);
  if (op == "!=") {
    if (lit_r && *lit_r == 0 && !name_l.empty()) out.insert(name_l);
    if (lit_l && *lit_l == 0 && !name_r.empty()) out.insert(name_r);
  } else if (op == ">") {
    if (lit_r && *lit_r >= 0 && !name_l.empty()) out.insert(name_l);
  } else if (op == "<") {
    if (lit_l && *lit_l >= 0 && !name_r.empty()) out.insert(name_r);
  } else if (op == ">=") {
    if (lit_r && *lit_r >= 1 && !name_l.empty()) out.insert(name_l);
  } else if (op == "<=") {
    if (lit_l && *lit_l >= 1 && !name_r.empty()) out.insert(name_r);
  }
}

/// x == 0, x <= 0, x < 1 ... joined by || (if (...) revert semantics).
void nonzero_when_false(const Json& cond, std::set<std::string>& out) {
  if (node_type(cond) == "TupleExpression" && field(cond, "components").size() == 1) {
    nonzero_when_false(cond["components"][0], out);
    return;
  }
  if (node_type(cond) != "BinaryOperation") return;
  const std::string op = field(cond, "operator").get<std::string>();
  const Json& lhs = field(cond, "leftExpression");
  const Json& rhs = field(cond, "rightExpression");
  if (op == "||") {
    nonzero_when_false(lhs, out);
    nonzero_when_false(rhs, out);
    return;
  }
  auto lit_l = small_literal(lhs);
  auto lit_r = small_literal(rhs);
  auto name_l = identifier_name(lhs);
  auto name_r = identifier_name(rhs);
  if (op == "==" || op == "<=") {
    if (lit_r && *lit_r == 0 && !name_l.empty()) out.insert(name_l);
  }
  if (op == "==" || op == ">=") {
    if (lit_l && *lit_l == 0 && !name_r.empty()) out.insert(name_r);
  }
  if (op == "<" && lit_r && *lit_r == 1 && !name_l.empty()) out.insert(name_l);
}

std::optional<bool> constant_condition(const Json& cond) {
  if (node_type(cond) == "Literal" && field(cond, "kind") == "bool") return field(cond, "value") == "true";
  if (node_type(cond) == "TupleExpression" && field(cond, "components").size() == 1)
    return constant_condition(cond["components"][0]);
  return std::nullopt;
}

bool is_revert_call(const Json& stmt) {
  if (node_type(stmt) == "RevertStatement") return true;
  if (node_type(stmt) != "ExpressionStatement") return false;
  const Json& e = field(stmt, "expression");
  return node_type(e) == "FunctionCall" && node_type(field(e, "expression")) == "Identifier" &&
         field(field(e, "expression"), "name") == "revert";
}

bool body_reverts(const Json& body) {
  if (is_revert_call(body)) return true;
  if (node_type(body) == "Block" || node_type(body) == "UncheckedBlock") {
    for (const auto& s : field(body, "statements"))
      if (is_revert_call(s)) return true;
  }
  return false;
}

/// Symbols visible while analysing one function or modifier.
struct Scope {
  const std::unordered_map<std::int64_t, std::string>* state_vars = nullptr;
  std::unordered_map<std::int64_t, std::string> params;
};

class StatementAnalyzer {
 public:
  StatementAnalyzer(const Scope& scope, const LineTable& lines, std::vector<UnsupportedConstruct>& unsupported)
      : scope_(scope), lines_(lines), unsupported_(unsupported) {}

  std::vector<StatementFact> flatten(const Json& body) {
    facts_.clear();
    if (body.is_object()) visit_statement(body);
    return std::move(facts_);
  }

 private:
  enum class Mode { Read, Write };

  StatementFact& open_fact(const Json& stmt) {
    StatementFact f;
    f.index = static_cast<std::uint32_t>(facts_.size());
    f.src_location = lines_.locate(stmt);
    f.node_type = node_type(stmt);
    facts_.push_back(std::move(f));
    return facts_.back();
  }

  void opaque(const Json& stmt, const char* reason) {
    auto& f = open_fact(stmt);
    f.opaque = true;
    unsupported_.push_back({node_type(stmt), f.src_location, reason});
  }

  void visit_statement(const Json& stmt) {
    if (!stmt.is_object()) return;
    const std::string type = node_type(stmt);
    if (type == "Block" || type == "UncheckedBlock") {
      for (const auto& s : field(stmt, "statements")) visit_statement(s);
    } else if (type == "IfStatement") {
      const Json& cond = field(stmt, "condition");
      {
        auto& f = open_fact(stmt);
        expr(cond, f, Mode::Read);
        if (body_reverts(field(stmt, "trueBody"))) {
          GuardFact g;
          g.kind = GuardKind::IfRevert;
          g.condition_mentions = mentions_of(cond);
          g.is_constant_condition = constant_condition(cond);
          nonzero_when_false(cond, g.nonzero_symbols);
          f.guards.push_back(std::move(g));
        }
      }
      visit_statement(field(stmt, "trueBody"));
      visit_statement(field(stmt, "falseBody"));
    } else if (type == "ForStatement") {
      {
        auto& f = open_fact(stmt);
        const Json& init = field(stmt, "initializationExpression");
        if (node_type(init) == "VariableDeclarationStatement") {
          expr(field(init, "initialValue"), f, Mode::Read);
        } else if (node_type(init) == "ExpressionStatement") {
          expr(field(init, "expression"), f, Mode::Read);
        }
        loop_condition(field(stmt, "condition"), f);
        const Json& step = field(stmt, "loopExpression");
        if (step.is_object()) expr(field(step, "expression"), f, Mode::Read);
      }
      visit_statement(field(stmt, "body"));
    } else if (type == "WhileStatement") {
      loop_condition(field(stmt, "condition"), open_fact(stmt));
      visit_statement(field(stmt, "body"));
    } else if (type == "DoWhileStatement") {
      visit_statement(field(stmt, "body"));
      loop_condition(field(stmt, "condition"), open_fact(stmt));
    } else if (type == "ExpressionStatement") {
      expr(field(stmt, "expression"), open_fact(stmt), Mode::Read);
    } else if (type == "VariableDeclarationStatement") {
      expr(field(stmt, "initialValue"), open_fact(stmt), Mode::Read);
    } else if (type == "Return") {
      expr(field(stmt, "expression"), open_fact(stmt), Mode::Read);
    } else if (type == "EmitStatement") {
      expr(field(stmt, "eventCall"), open_fact(stmt), Mode::Read);
    } else if (type == "RevertStatement") {
      expr(field(stmt, "errorCall"), open_fact(stmt), Mode::Read);
    } else if (type == "Break" || type == "Continue" || type == "PlaceholderStatement") {
      open_fact(stmt);
    } else if (type == "InlineAssembly") {
      opaque(stmt, "inline assembly is not interpreted");
    } else if (type == "TryStatement") {
      opaque(stmt, "try/catch is not modelled");
    } else {
      opaque(stmt, "unknown statement kind");
    }
  }

  void loop_condition(const Json& cond, StatementFact& f) {
    if (!cond.is_object()) return;
    expr(cond, f, Mode::Read);
    for (const auto& name : mentions_of(cond))
      if (is_param_name(name)) f.sensitive_uses.push_back({SensitiveUseKind::LoopBound, name});
  }

  bool is_param_name(const std::string& name) const {
    for (const auto& [id, n] : scope_.params)
      if (n == name) return true;
    return false;
  }

  std::optional<std::string> state_var(const Json& node) const {
    if (node_type(node) != "Identifier") return std::nullopt;
    auto it = scope_.state_vars->find(ref_id(node));
    if (it == scope_.state_vars->end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::string> param(const Json& node) const {
    if (node_type(node) != "Identifier") return std::nullopt;
    auto it = scope_.params.find(ref_id(node));
    if (it == scope_.params.end()) return std::nullopt;
    return it->second;
  }

  ArithFact classify_denominator(ArithOp op, const Json& denom) const {
    ArithFact a;
    a.op = op;
    const Json& inner = strip_conversions(denom);
    if (node_type(inner) == "Literal" && field(inner, "kind") == "number") {
      a.denominator_kind = is_zero_literal(field(inner, "value").get<std::string>()) ? OperandKind::ZeroLiteral
                                                                                      : OperandKind::NonzeroLiteral;
    } else if (auto p = param(inner)) {
      a.denominator_kind = OperandKind::Parameter;
      a.denominator_symbol = *p;
    } else if (auto s = state_var(inner)) {
      a.denominator_kind = OperandKind::StateVar;
      a.denominator_symbol = *s;
    } else {
      a.denominator_kind = OperandKind::Expression;
    }
    return a;
  }

  void record_division(ArithOp op, const Json& denom, StatementFact& f) {
    auto a = classify_denominator(op, denom);
    if (op != ArithOp::Other && a.denominator_kind == OperandKind::Parameter)
      f.sensitive_uses.push_back({SensitiveUseKind::DivisionDenominator, *a.denominator_symbol});
    f.arithmetic.push_back(std::move(a));
  }

  void expr(const Json& e, StatementFact& f, Mode mode) {
    if (e.is_array()) {
      for (const auto& c : e) expr(c, f, mode);
      return;
    }
    if (!e.is_object()) return;
    const std::string type = node_type(e);
    if (type == "Identifier") {
      if (auto s = state_var(e)) (mode == Mode::Write ? f.writes_state : f.reads_state).insert(*s);
    } else if (type == "MemberAccess") {
      const Json& base = field(e, "expression");
      if (is_magic_base(base, "block")) {
        if (auto sym = env_member(field(e, "memberName").get<std::string>())) f.env_reads.insert(*sym);
        return;
      }
      expr(base, f, mode);
    } else if (type == "IndexAccess") {
      const Json& base = field(e, "baseExpression");
      const Json& index = field(e, "indexExpression");
      expr(base, f, mode);
      expr(index, f, Mode::Read);
      const std::string base_type = type_string(base);
      if (!base_type.empty() && base_type.find(']') != std::string::npos && !base_type.starts_with("mapping(")) {
        for (const auto& name : mentions_of(index))
          if (is_param_name(name)) f.sensitive_uses.push_back({SensitiveUseKind::ArrayIndex, name});
      }
    } else if (type == "IndexRangeAccess") {
      expr(field(e, "baseExpression"), f, mode);
      expr(field(e, "startExpression"), f, Mode::Read);
      expr(field(e, "endExpression"), f, Mode::Read);
    } else if (type == "Assignment") {
      const std::string op = field(e, "operator").get<std::string>();
      expr(field(e, "leftHandSide"), f, Mode::Write);
      if (op != "=") expr(field(e, "leftHandSide"), f, Mode::Read);
      expr(field(e, "rightHandSide"), f, Mode::Read);
      if (op == "/=") record_division(ArithOp::Div, field(e, "rightHandSide"), f);
      if (op == "%=") record_division(ArithOp::Mod, field(e, "rightHandSide"), f);
    } else if (type == "UnaryOperation") {
      const std::string op = field(e, "operator").get<std::string>();
      if (op == "++" || op == "--" || op == "delete") expr(field(e, "subExpression"), f, Mode::Write);
      if (op != "delete") expr(field(e, "subExpression"), f, Mode::Read);
    } else if (type == "BinaryOperation") {
      const std::string op = field(e, "operator").get<std::string>();
      expr(field(e, "leftExpression"), f, Mode::Read);
      expr(field(e, "rightExpression"), f, Mode::Read);
      if (op == "/") record_division(ArithOp::Div, field(e, "rightExpression"), f);
      else if (op == "%") record_division(ArithOp::Mod, field(e, "rightExpression"), f);
      else if (op == "+" || op == "-" || op == "*" || op == "**") record_division(ArithOp::Other, field(e, "rightExpression"), f);
    } else if (type == "Conditional") {
      expr(field(e, "condition"), f, Mode::Read);
      expr(field(e, "trueExpression"), f, mode);
      expr(field(e, "falseExpression"), f, mode);
    } else if (type == "TupleExpression") {
      for (const auto& c : field(e, "components"))
        if (c.is_object()) expr(c, f, mode);
    } else if (type == "FunctionCall") {
      call(e, f);
    } else if (type == "FunctionCallOptions") {
      expr(field(e, "expression"), f, Mode::Read);
      expr(field(e, "options"), f, Mode::Read);
    } else if (type == "Literal" || type == "ElementaryTypeNameExpression" || type == "NewExpression") {
      return;
    } else {
      for (const auto& [key, child] : e.items()) {
        if (key == "typeDescriptions" || key == "argumentTypes") continue;
        if (child.is_object() || child.is_array()) expr(child, f, Mode::Read);
      }
    }
  }

  void call(const Json& e, StatementFact& f) {
    const Json& args = field(e, "arguments");
    const std::string kind = field(e, "kind").is_string() ? field(e, "kind").get<std::string>() : "";
    if (kind == "typeConversion" || kind == "structConstructorCall") {
      expr(args, f, Mode::Read);
      return;
    }
    const Json* callee = &field(e, "expression");
    const Json* value_expr = nullptr;
    if (node_type(*callee) == "FunctionCallOptions") {
      const auto& names = field(*callee, "names");
      const auto& options = field(*callee, "options");
      for (std::size_t i = 0; i < names.size() && i < options.size(); ++i)
        if (names[i] == "value") value_expr = &options[i];
      expr(options, f, Mode::Read);
      callee = &field(*callee, "expression");
    }
    const std::string callee_type = type_identifier(*callee);

    if (node_type(*callee) == "Identifier" && is_builtin_ref(ref_id(*callee))) {
      const std::string name = field(*callee, "name").get<std::string>();
      if ((name == "require" || name == "assert") && args.is_array() && !args.empty()) {
        GuardFact g;
        g.kind = name == "require" ? GuardKind::Require : GuardKind::Assert;
        g.condition_mentions = mentions_of(args[0]);
        g.is_constant_condition = constant_condition(args[0]);
        nonzero_when_true(args[0], g.nonzero_symbols);
        f.guards.push_back(std::move(g));
        expr(args, f, Mode::Read);
        return;
      }
      if (name == "selfdestruct" || name == "suicide") {
        ExternalCallFact c;
        c.mechanism = CallMechanism::Selfdestruct;
        c.to_msg_sender = args.is_array() && !args.empty() && is_msg_sender(args[0]);
        f.external_calls.push_back(std::move(c));
        expr(args, f, Mode::Read);
        return;
      }
      if (name == "blockhash") f.env_reads.insert(EnvSymbol::BlockhashCall);
      expr(args, f, Mode::Read);
      return;
    }

    if (node_type(*callee) == "MemberAccess") {
      const Json& base = field(*callee, "expression");
      const std::string member = field(*callee, "memberName").get<std::string>();
      std::optional<CallMechanism> mechanism;
      if (callee_type.starts_with("t_function_transfer")) mechanism = CallMechanism::Transfer;
      else if (callee_type.starts_with("t_function_send")) mechanism = CallMechanism::Send;
      else if (callee_type.starts_with("t_function_baredelegatecall")) mechanism = CallMechanism::Delegatecall;
      else if (callee_type.starts_with("t_function_bare")) mechanism = CallMechanism::LowLevelCall;
      else if (callee_type.starts_with("t_function_external")) mechanism = CallMechanism::ExternalFunctionCall;

      if (mechanism) {
        ExternalCallFact c;
        c.mechanism = *mechanism;
        c.to_msg_sender = is_msg_sender(base);
        if (*mechanism == CallMechanism::Transfer || *mechanism == CallMechanism::Send) {
          c.carries_value = true;
          c.gas_capped_2300 = true;
          if (args.is_array() && !args.empty()) c.value_mentions = mentions_of(args[0]);
        } else if (value_expr) {
          c.carries_value = true;
          c.value_mentions = mentions_of(*value_expr);
        }
        for (const auto& name : c.value_mentions)
          if (is_param_name(name)) f.sensitive_uses.push_back({SensitiveUseKind::CallValue, name});
        f.external_calls.push_back(std::move(c));
        expr(base, f, Mode::Read);
        expr(args, f, Mode::Read);
        return;
      }
      if (callee_type.starts_with("t_function_arraypush") || callee_type.starts_with("t_function_arraypop")) {
        expr(base, f, Mode::Write);
        expr(base, f, Mode::Read);
        expr(args, f, Mode::Read);
        return;
      }
      if (member == "blockhash") f.env_reads.insert(EnvSymbol::BlockhashCall);
    }
    expr(*callee, f, Mode::Read);
    expr(args, f, Mode::Read);
  }

  const Scope& scope_;
  const LineTable& lines_;
  std::vector<UnsupportedConstruct>& unsupported_;
  std::vector<StatementFact> facts_;
};

std::vector<Param> read_params(const Json& list, Scope* scope) {
  std::vector<Param> out;
  for (const auto& p : field(list, "parameters")) {
    Param param{field(p, "name").get<std::string>(), type_string(p)};
    if (scope && p.contains("id")) scope->params.emplace(p["id"].get<std::int64_t>(), param.name);
    out.push_back(std::move(param));
  }
  return out;
}

Visibility parse_visibility(const std::string& v) {
  if (v == "external") return Visibility::External;
  if (v == "internal") return Visibility::Internal;
  if (v == "private") return Visibility::Private;
  return Visibility::Public;
}

FunctionKind parse_function_kind(const std::string& k) {
  if (k == "receive") return FunctionKind::Receive;
  if (k == "fallback") return FunctionKind::Fallback;
  if (k == "constructor") return FunctionKind::Constructor;
  return FunctionKind::Function;
}

void rename_mentions(std::set<std::string>& mentions, const std::map<std::string, std::set<std::string>>& renames) {
  std::set<std::string> out;
  for (const auto& m : mentions) {
    auto it = renames.find(m);
    if (it == renames.end()) {
      out.insert(m);
    } else {
      out.insert(it->second.begin(), it->second.end());
    }
  }
  mentions = std::move(out);
}

class ContractBuilder {
 public:
  ContractBuilder(const SourceUnit& unit, const LineTable& lines,
                  const std::unordered_map<std::int64_t, const Json*>& contracts)
      : unit_(unit), lines_(lines), contracts_(contracts) {}

  ContractIR build(const Json& def) {
    ContractIR ir;
    ir.name = field(def, "name").get<std::string>();
    ir.source_path = unit_.path.generic_string();
    ir.kind = ContractKind::Contract;

    std::vector<std::pair<const Json*, std::string>> layers;
    for (const auto& spec : field(def, "baseContracts")) {
      const Json& base_name = field(spec, "baseName");
      auto it = contracts_.find(ref_id(base_name));
      if (it == contracts_.end()) {
        ir.unsupported.push_back({"InheritanceSpecifier", lines_.locate(spec), "base contract is not in this source unit"});
        continue;
      }
      const Json& base = *it->second;
      if (field(base, "baseContracts").is_array() && !field(base, "baseContracts").empty())
        ir.unsupported.push_back(
            {"ContractDefinition", lines_.locate(base), "inheritance deeper than one level is not flattened"});
      layers.emplace_back(&base, field(base, "name").get<std::string>());
    }
    layers.emplace_back(&def, std::string());

    for (const auto& [node, from] : layers) collect_state_vars(*node, ir);
    for (const auto& [node, from] : layers) collect_modifiers(*node, ir);

    // Own functions shadow base functions with the same signature.
    std::vector<FunctionIR> own;
    std::vector<FunctionIR> inherited;
    for (const auto& [node, from] : layers) {
      for (const auto& member : field(*node, "nodes")) {
        if (node_type(member) != "FunctionDefinition") continue;
        if (!from.empty() && field(member, "kind") == "constructor") continue;
        auto fn = build_function(member, ir);
        fn.inherited_from = from;
        (from.empty() ? own : inherited).push_back(std::move(fn));
      }
    }
    for (auto& fn : inherited) {
      bool shadowed = std::any_of(own.begin(), own.end(), [&](const FunctionIR& o) {
        return o.kind == fn.kind && o.signature() == fn.signature();
      });
      bool duplicate = std::any_of(ir.functions.begin(), ir.functions.end(), [&](const FunctionIR& o) {
        return o.kind == fn.kind && o.signature() == fn.signature();
      });
      if (!shadowed && !duplicate) ir.functions.push_back(std::move(fn));
    }
    for (auto& fn : own) ir.functions.push_back(std::move(fn));

    for (const auto& fn : ir.functions) {
      if (fn.kind == FunctionKind::Receive) ir.has_receive = true;
      if (fn.kind == FunctionKind::Fallback && fn.is_payable) ir.has_payable_fallback = true;
      if (fn.kind == FunctionKind::Constructor) {
        ir.constructor_params = fn.params;
        ir.constructor_payable = fn.is_payable;
      }
    }
    return ir;
  }

 private:
  void collect_state_vars(const Json& def, ContractIR& ir) {
    for (const auto& member : field(def, "nodes")) {
      if (node_type(member) != "VariableDeclaration" || field(member, "stateVariable") != true) continue;
      StateVar v;
      v.name = field(member, "name").get<std::string>();
      v.type = type_string(member);
      v.is_constant = field(member, "constant") == true;
      state_ids_[member["id"].get<std::int64_t>()] = v.name;
      if (!ir.find_state_var(v.name)) ir.state_vars.push_back(std::move(v));
    }
  }

  void collect_modifiers(const Json& def, ContractIR& ir) {
    for (const auto& member : field(def, "nodes")) {
      if (node_type(member) != "ModifierDefinition") continue;
      Scope scope{&state_ids_, {}};
      ModifierIR mod;
      mod.name = field(member, "name").get<std::string>();
      mod.params = read_params(field(member, "parameters"), &scope);
      StatementAnalyzer analyzer(scope, lines_, ir.unsupported);
      for (const auto& fact : analyzer.flatten(field(member, "body")))
        for (const auto& g : fact.guards) mod.guards.push_back(g);
      auto same = std::find_if(ir.modifiers.begin(), ir.modifiers.end(),
                               [&](const ModifierIR& m) { return m.name == mod.name; });
      if (same != ir.modifiers.end()) {
        *same = std::move(mod);
      } else {
        ir.modifiers.push_back(std::move(mod));
      }
    }
  }

  FunctionIR build_function(const Json& node, ContractIR& ir) {
    Scope scope{&state_ids_, {}};
    FunctionIR fn;
    fn.kind = parse_function_kind(field(node, "kind").get<std::string>());
    fn.name = field(node, "name").get<std::string>();
    if (fn.name.empty()) fn.name = std::string(to_string(fn.kind));
    fn.visibility = parse_visibility(field(node, "visibility").get<std::string>());
    fn.state_mutability = field(node, "stateMutability").get<std::string>();
    fn.is_payable = fn.state_mutability == "payable";
    fn.params = read_params(field(node, "parameters"), &scope);
    fn.src_location = lines_.locate(node);

    for (const auto& inv : field(node, "modifiers")) {
      if (field(inv, "kind") == "baseConstructorSpecifier") continue;
      const Json& mod_name = field(inv, "modifierName");
      std::string name = field(mod_name, "name").is_string() ? mod_name["name"].get<std::string>() : "";
      if (name.empty()) continue;
      fn.modifiers_applied.push_back(name);
      const ModifierIR* mod = ir.find_modifier(name);
      if (!mod) continue;
      std::map<std::string, std::set<std::string>> renames;
      std::map<std::string, std::string> symbol_renames;
      const Json& args = field(inv, "arguments");
      for (std::size_t i = 0; i < mod->params.size() && args.is_array() && i < args.size(); ++i) {
        renames[mod->params[i].name] = mentions_of(args[i]);
        if (auto n = identifier_name(args[i]); !n.empty()) symbol_renames[mod->params[i].name] = n;
      }
      for (auto g : mod->guards) {
        g.from_modifier = name;
        rename_mentions(g.condition_mentions, renames);
        std::set<std::string> nonzero;
        for (const auto& s : g.nonzero_symbols) {
          auto it = symbol_renames.find(s);
          if (it != symbol_renames.end()) {
            nonzero.insert(it->second);
          } else if (!renames.contains(s)) {
            nonzero.insert(s);
          }
        }
        g.nonzero_symbols = std::move(nonzero);
        fn.modifier_guards.push_back(std::move(g));
      }
    }

    StatementAnalyzer analyzer(scope, lines_, ir.unsupported);
    fn.body = analyzer.flatten(field(node, "body"));
    return fn;
  }

  const SourceUnit& unit_;
  const LineTable& lines_;
  const std::unordered_map<std::int64_t, const Json*>& contracts_;
  std::unordered_map<std::int64_t, std::string> state_ids_;
};

}  // namespace

std::vector<ContractIR> build_ir(const SourceUnit& unit) {
  const Json& root = unit.ast_root;
  if (node_type(root) != "SourceUnit") throw Error(ErrorCode::MalformedAst, "nodeType");
  const Json& nodes = field(root, "nodes");
  if (!nodes.is_array()) throw Error(ErrorCode::MalformedAst, "nodes");

  LineTable lines(unit.raw_source, unit.path.generic_string());
  std::unordered_map<std::int64_t, const Json*> contracts;
  for (const auto& node : nodes)
    if (node_type(node) == "ContractDefinition" && node.contains("id")) contracts[node["id"].get<std::int64_t>()] = &node;

  std::vector<ContractIR> out;
  for (const auto& node : nodes) {
    if (node_type(node) != "ContractDefinition") continue;
    if (field(node, "contractKind") != "contract" || field(node, "abstract") == true) continue;
    try {
      ContractBuilder builder(unit, lines, contracts);
      out.push_back(builder.build(node));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedAst, std::string("contract ") + node.value("name", "?") + ": " + e.what());
    }
  }
  return out;
}

}  // namespace scproof

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
#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "scproof/error.hpp"
#include "scproof/scan.hpp"
#include "test_env.hpp"

namespace scproof {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Independent reading of the compact AST: "start:length:file" and the line
// computed by counting newlines in the raw source.
struct RawSrc {
  std::uint32_t start = 0;
  std::uint32_t length = 0;
};

RawSrc parse_src(const std::string& src) {
  RawSrc r;
  const auto a = src.find(':');
  const auto b = src.find(':', a + 1);
  r.start = static_cast<std::uint32_t>(std::stoul(src.substr(0, a)));
  r.length = static_cast<std::uint32_t>(std::stoul(src.substr(a + 1, b - a - 1)));
  return r;
}

std::uint32_t line_of(const std::string& source, std::uint32_t offset) {
  return 1 + static_cast<std::uint32_t>(std::count(source.begin(), source.begin() + offset, '\n'));
}

const json* find_contract_node(const json& unit_ast, const std::string& name) {
  for (const auto& n : unit_ast["nodes"])
    if (n["nodeType"] == "ContractDefinition" && n["name"] == name) return &n;
  return nullptr;
}

const json* find_function_node(const json& contract, const std::string& name, const std::string& kind) {
  for (const auto& n : contract["nodes"])
    if (n["nodeType"] == "FunctionDefinition" && n["kind"] == kind && (kind != "function" || n["name"] == name))
      return &n;
  return nullptr;
}

// Nested statements are flattened into the body in source order, so every
// top-level statement of the AST block must appear as a subsequence.
TEST(IrBuilder, TopLevelStatementsKeepAstOrderAndLocations) {
  for (const auto& kind : testenv::fixture_kinds()) {
    for (const char* variant : {"vulnerable", "safe"}) {
      const auto unit = load_ast_snapshot(testenv::fixture_dir(kind) / "ast" / (std::string(variant) + ".json"));
      for (const auto& ir : build_ir(unit)) {
        const json* contract = find_contract_node(unit.ast_root, ir.name);
        ASSERT_NE(contract, nullptr) << ir.name;
        for (const auto& fn : ir.functions) {
          if (!fn.inherited_from.empty()) continue;
          const json* node = find_function_node(*contract, fn.name, std::string(to_string(fn.kind)));
          ASSERT_NE(node, nullptr) << kind << " " << fn.name;
          std::size_t next = 0;
          for (const auto& stmt : (*node)["body"]["statements"]) {
            const auto raw = parse_src(stmt["src"].get<std::string>());
            while (next < fn.body.size() && fn.body[next].src_location.start != raw.start) ++next;
            ASSERT_LT(next, fn.body.size()) << kind << " " << fn.name << " missing statement at " << raw.start;
            const auto& fact = fn.body[next];
            EXPECT_EQ(fact.src_location.length, raw.length);
            EXPECT_EQ(fact.src_location.line, line_of(unit.raw_source, raw.start));
            EXPECT_EQ(fact.node_type, stmt["nodeType"].get<std::string>());
            ++next;
          }
          for (std::size_t i = 0; i < fn.body.size(); ++i) EXPECT_EQ(fn.body[i].index, i);
        }
      }
    }
  }
}

TEST(IrBuilder, NestedStatementsAreFlattened) {
  const auto ir = testenv::load_contract(testenv::data_dir() / "solidity/ast/DivIfRevert.json", "DivIfRevert");
  const auto& body = ir.functions.at(0).body;
  std::vector<std::string> types;
  for (const auto& s : body) types.push_back(s.node_type);
  EXPECT_EQ(types, (std::vector<std::string>{"IfStatement", "RevertStatement", "Return"}));
}

TEST(IrBuilder, ReentrancySimpleFacts) {
  const auto ir = testenv::load_contract(testenv::fixture_dir("reentrancy") / "ast/vulnerable.json", "ReentrancySimple");
  ASSERT_EQ(ir.state_vars.size(), 1u);
  EXPECT_EQ(ir.state_vars[0].name, "balance");
  EXPECT_TRUE(ir.state_vars[0].is_address_keyed_mapping());

  const auto* deposit = ir.find_function("deposit");
  ASSERT_NE(deposit, nullptr);
  EXPECT_TRUE(deposit->is_payable);
  ASSERT_EQ(deposit->body.size(), 1u);
  EXPECT_EQ(deposit->body[0].writes_state, std::set<std::string>{"balance"});

  const auto* withdraw = ir.find_function("withdraw");
  ASSERT_NE(withdraw, nullptr);
  EXPECT_FALSE(withdraw->is_payable);
  ASSERT_EQ(withdraw->body.size(), 3u);
  EXPECT_EQ(withdraw->body[0].reads_state, std::set<std::string>{"balance"});
  EXPECT_TRUE(withdraw->body[0].external_calls.empty());
  ASSERT_EQ(withdraw->body[1].external_calls.size(), 1u);
  const auto& call = withdraw->body[1].external_calls[0];
  EXPECT_EQ(call.mechanism, CallMechanism::Transfer);
  EXPECT_TRUE(call.gas_capped_2300);
  EXPECT_TRUE(call.carries_value);
  EXPECT_TRUE(call.to_msg_sender);
  EXPECT_TRUE(call.value_mentions.contains("addrBal"));
  EXPECT_EQ(withdraw->body[2].writes_state, std::set<std::string>{"balance"});
  EXPECT_FALSE(ir.has_receive);
}

TEST(IrBuilder, ComplexFallbackReceiveAndModifiers) {
  const auto ir = testenv::load_contract(testenv::fixture_dir("complex_fallback") / "ast/vulnerable.json", "ComplexFallback");
  EXPECT_TRUE(ir.has_receive);
  const auto* recv = ir.find_function("receive");
  ASSERT_NE(recv, nullptr);
  EXPECT_EQ(recv->kind, FunctionKind::Receive);
  ASSERT_EQ(recv->body.size(), 1u);
  EXPECT_EQ(recv->body[0].writes_state, std::set<std::string>{"_latestDonor"});

  const auto* mod = ir.find_modifier("onlyOwner");
  ASSERT_NE(mod, nullptr);
  EXPECT_TRUE(mod->guards_sender());
  const auto* withdraw = ir.find_function("withdrawFunding");
  ASSERT_NE(withdraw, nullptr);
  EXPECT_EQ(withdraw->modifiers_applied, std::vector<std::string>{"onlyOwner"});
  ASSERT_FALSE(withdraw->modifier_guards.empty());
  EXPECT_EQ(withdraw->modifier_guards[0].from_modifier, "onlyOwner");
  EXPECT_TRUE(withdraw->modifier_guards[0].condition_mentions.contains("msg.sender"));
}

TEST(IrBuilder, ModifierParametersRenamedToArguments) {
  const auto ir = testenv::load_contract(testenv::data_dir() / "solidity/ast/ModifierParams.json", "ModifierParams");
  const auto* split = ir.find_function("split");
  ASSERT_NE(split, nullptr);
  bool parts_nonzero = false;
  bool sender_if_revert = false;
  for (const auto& g : split->modifier_guards) {
    if (g.from_modifier == "nonZero" && g.nonzero_symbols.contains("parts")) parts_nonzero = true;
    if (g.from_modifier == "onlyOwner" && g.kind == GuardKind::IfRevert && g.condition_mentions.contains("msg.sender"))
      sender_if_revert = true;
  }
  EXPECT_TRUE(parts_nonzero);
  EXPECT_TRUE(sender_if_revert);
  ASSERT_EQ(split->body.size(), 1u);
  ASSERT_EQ(split->body[0].arithmetic.size(), 1u);
  EXPECT_EQ(split->body[0].arithmetic[0].op, ArithOp::Div);
  EXPECT_EQ(split->body[0].arithmetic[0].denominator_kind, OperandKind::Parameter);
  EXPECT_EQ(split->body[0].arithmetic[0].denominator_symbol, "parts");
}

TEST(IrBuilder, GuardAndArithmeticClassification) {
  const auto lit = testenv::load_contract(testenv::data_dir() / "solidity/ast/DivZeroLiteral.json", "DivZeroLiteral");
  ASSERT_EQ(lit.functions.size(), 1u);
  bool zero_lit = false;
  for (const auto& st : lit.functions[0].body)
    for (const auto& a : st.arithmetic) zero_lit |= a.denominator_kind == OperandKind::ZeroLiteral;
  EXPECT_TRUE(zero_lit);

  const auto guarded = testenv::load_contract(testenv::data_dir() / "solidity/ast/DivIfRevert.json", "DivIfRevert");
  const auto& body = guarded.functions[0].body;
  ASSERT_EQ(body.size(), 3u);
  ASSERT_EQ(body[0].guards.size(), 1u);
  EXPECT_EQ(body[0].guards[0].kind, GuardKind::IfRevert);
  EXPECT_TRUE(body[0].guards[0].nonzero_symbols.contains("d"));
  ASSERT_EQ(body[2].arithmetic.size(), 1u);
  EXPECT_EQ(body[2].arithmetic[0].op, ArithOp::Mod);

  const auto rt = testenv::load_contract(testenv::data_dir() / "solidity/ast/RequireTrue.json", "RequireTrue");
  ASSERT_FALSE(rt.functions[0].body.empty());
  ASSERT_EQ(rt.functions[0].body[0].guards.size(), 1u);
  EXPECT_EQ(rt.functions[0].body[0].guards[0].is_constant_condition, std::optional<bool>(true));

  const auto ar = testenv::load_contract(testenv::data_dir() / "solidity/ast/AlwaysRevert.json", "AlwaysRevert");
  ASSERT_EQ(ar.functions[0].body[0].guards.size(), 1u);
  EXPECT_EQ(ar.functions[0].body[0].guards[0].is_constant_condition, std::optional<bool>(false));
}

TEST(IrBuilder, UnsupportedConstructsAreRecordedNotFatal) {
  const auto constructs = testenv::load_contract(testenv::data_dir() / "solidity/ast/Constructs.json", "Constructs");
  std::set<std::string> types;
  for (const auto& u : constructs.unsupported) types.insert(u.node_type);
  EXPECT_TRUE(types.contains("InlineAssembly"));
  EXPECT_TRUE(types.contains("TryStatement"));
  EXPECT_TRUE(constructs.has_payable_fallback);
  EXPECT_TRUE(constructs.constructor_payable);
  ASSERT_EQ(constructs.constructor_params.size(), 2u);
  EXPECT_EQ(constructs.constructor_params[0].type, "address");
  // The direct base is flattened in.
  const auto* base_write = constructs.find_function("baseWrite");
  ASSERT_NE(base_write, nullptr);
  EXPECT_EQ(base_write->inherited_from, "Base");
  // The override wins over the base declaration.
  std::size_t shadowed = 0;
  for (const auto& f : constructs.functions) shadowed += f.name == "shadowed";
  EXPECT_EQ(shadowed, 1u);
  EXPECT_TRUE(constructs.find_function("shadowed")->inherited_from.empty());

  const auto deep = testenv::load_contract(testenv::data_dir() / "solidity/ast/DeepInherit.json", "DeepInherit");
  EXPECT_FALSE(deep.unsupported.empty());
}

TEST(IrBuilder, InterfacesAndAbstractContractsAreSkipped) {
  const auto all = testenv::load_all(testenv::data_dir() / "solidity/ast/Constructs.json");
  std::set<std::string> names;
  for (const auto& ir : all) names.insert(ir.name);
  EXPECT_FALSE(names.contains("IThing"));
  EXPECT_TRUE(names.contains("Constructs"));
}

TEST(IrBuilder, DeterministicAcrossRebuilds) {
  for (const auto& p : testenv::files_with_ext(testenv::data_dir() / "solidity/ast", ".json")) {
    const auto unit = load_ast_snapshot(p);
    const auto a = build_ir(unit);
    const auto b = build_ir(load_ast_snapshot(p));
    ASSERT_EQ(a.size(), b.size()) << p;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i], b[i]);
      EXPECT_EQ(canonical(a[i]), canonical(b[i])) << p;
    }
  }
}

TEST(IrBuilder, CanonicalFormIsSortedAndCompact) {
  const auto ir = testenv::load_contract(testenv::fixture_dir("reentrancy") / "ast/vulnerable.json", "ReentrancySimple");
  const auto text = canonical(ir);
  EXPECT_EQ(text.find('\n'), std::string::npos);
  EXPECT_EQ(json::parse(text).dump(), text);
}

TEST(IrBuilder, StandardJsonRoundTripGivesSameIr) {
  for (const auto& kind : testenv::fixture_kinds()) {
    const auto unit = load_ast_snapshot(testenv::fixture_dir(kind) / "ast/vulnerable.json");
    const auto again = source_unit_from_standard_json(unit.standard_json, unit.raw_source, unit.path);
    const auto a = build_ir(unit);
    const auto b = build_ir(again);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(canonical(a[i]), canonical(b[i])) << kind;
  }
}

TEST(IrBuilder, MalformedAstNamesTheProblem) {
  const auto snapshot = testenv::fixture_dir("complex_fallback") / "ast/vulnerable.json";
  auto doc = json::parse(text::read_file(snapshot));
  // Point the receive() body statement past the end of the source text.
  bool corrupted = false;
  for (auto& n : doc["sources"]["vulnerable.sol"]["ast"]["nodes"])
    if (n["nodeType"] == "ContractDefinition")
      for (auto& member : n["nodes"])
        if (member["nodeType"] == "FunctionDefinition" && member["kind"] == "receive") {
          member["body"]["statements"][0]["src"] = "99999:5:0";
          corrupted = true;
        }
  ASSERT_TRUE(corrupted);
  const text::TempDir dir("ir-malformed");
  text::write_file(dir.path / "vulnerable.json", doc.dump());
  try {
    const auto unit = load_ast_snapshot(dir.path / "vulnerable.json", testenv::fixture_dir("complex_fallback") / "vulnerable.sol");
    (void)build_ir(unit);
    FAIL() << "expected MalformedAst";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedAst);
  }
}

TEST(IrBuilder, SnapshotWithoutSourceFails) {
  const text::TempDir dir("ir-nosrc");
  fs::copy_file(testenv::fixture_dir("complex_fallback") / "ast/vulnerable.json", dir.path / "vulnerable.json");
  try {
    (void)load_ast_snapshot(dir.path / "vulnerable.json");
    FAIL() << "expected SourceNotFound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SourceNotFound);
  }
}

TEST(IrBuilder, PragmaVersion) {
  EXPECT_EQ(pragma_version("pragma solidity 0.8.29;"), "0.8.29");
  EXPECT_EQ(pragma_version("pragma solidity =0.8.29;"), "0.8.29");
  EXPECT_EQ(pragma_version("pragma solidity ^0.8.0;"), "");
  EXPECT_EQ(pragma_version("contract A {}"), "");
}

TEST(Scan, ParallelMatchesSerial) {
  std::vector<SourceUnit> units;
  for (const auto& p : testenv::files_with_ext(testenv::data_dir() / "solidity/ast", ".json"))
    units.push_back(load_ast_snapshot(p));
  for (const auto& kind : testenv::fixture_kinds())
    for (const char* v : {"vulnerable.json", "safe.json"}) units.push_back(load_ast_snapshot(testenv::fixture_dir(kind) / "ast" / v));
  const auto serial = scan_units_serial(units, all_defect_kinds());
  for (int threads : {1, 2, 4, 8}) EXPECT_EQ(scan_units_parallel(units, all_defect_kinds(), {}, threads), serial);
}

class CompiledEquivalence : public ::testing::TestWithParam<std::string> {};

TEST_P(CompiledEquivalence, FreshCompileMatchesSnapshot) {
  if (!testenv::have_solc()) GTEST_SKIP() << "no Solidity compiler configured";
  const auto dir = testenv::fixture_dir(GetParam());
  for (const char* v : {"vulnerable", "safe"}) {
    const auto snap = load_ast_snapshot(dir / "ast" / (std::string(v) + ".json"), dir / (std::string(v) + ".sol"));
    CompileOptions opts;
    opts.solc_path = testenv::solc_path();
    const auto fresh = compile_to_ast(dir / (std::string(v) + ".sol"), opts);
    const auto a = build_ir(snap);
    const auto b = build_ir(fresh);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(canonical(a[i]), canonical(b[i])) << GetParam() << " " << v;
  }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, CompiledEquivalence, ::testing::ValuesIn(testenv::fixture_kinds()));

TEST(Compile, MissingCompilerIsReported) {
  CompileOptions opts;
  opts.solc_path = "/nonexistent/solc";
  try {
    (void)compile_to_ast(testenv::fixture_dir("reentrancy") / "vulnerable.sol", opts);
    FAIL() << "expected CompilerNotFound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CompilerNotFound);
  }
}

TEST(Compile, SyntaxErrorIsCompileFailed) {
  if (!testenv::have_solc()) GTEST_SKIP() << "no Solidity compiler configured";
  const text::TempDir dir("ir-bad");
  text::write_file(dir.path / "Bad.sol", "// SPDX-License-Identifier: MIT\npragma solidity 0.8.29;\ncontract Bad { function f( }\n");
  CompileOptions opts;
  opts.solc_path = testenv::solc_path();
  try {
    (void)compile_to_ast(dir.path / "Bad.sol", opts);
    FAIL() << "expected CompileFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CompileFailed);
  }
}

TEST(Compile, PinnedVersionMismatch) {
  if (!testenv::have_solc()) GTEST_SKIP() << "no Solidity compiler configured";
  CompileOptions opts;
  opts.solc_path = testenv::solc_path();
  opts.version_hint = "0.8.20";
  try {
    (void)compile_to_ast(testenv::fixture_dir("reentrancy") / "vulnerable.sol", opts);
    FAIL() << "expected VersionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VersionMismatch);
  }
}

}  // namespace
}  // namespace scproof

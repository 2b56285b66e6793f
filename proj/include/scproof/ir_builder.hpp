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

#include <vector>

#include "scproof/ir.hpp"

namespace scproof {

/// One ContractIR per concrete (non-abstract) contract in the unit, with
/// statement facts in source order. Direct base contracts are flattened in;
/// deeper hierarchies, assembly and try/catch are recorded in
/// ContractIR::unsupported and never abort the build.
///
/// Throws Error(MalformedAst) when a node lacks a field the builder needs or
/// a src range falls outside the source text.
std::vector<ContractIR> build_ir(const SourceUnit& unit);

}  // namespace scproof

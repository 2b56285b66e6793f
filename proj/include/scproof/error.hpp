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

#include <stdexcept>
#include <string>
#include <string_view>

namespace scproof {

enum class ErrorCode {
  // ingestion
  CompilerNotFound,
  CompileFailed,
  VersionMismatch,
  MalformedAst,
  SourceNotFound,
  // template engine
  NoTemplateForKind,
  AnchorMissing,
  InvalidIdentifier,
  EmptyReply,
  TemplateInvalid,
  // llm client
  AuthFailed,
  RateLimited,
  TransportError,
  MalformedResponse,
  Timeout,
  NoStubForKey,
  UnparseableNormalization,
  LlmDisabled,
  // exec runner
  IoError,
  LayoutConflict,
  BackendNotFound,
  OutputUnparseable,
  JsonMalformed,
  // verdict
  RoleMismatch,
  TableInvalid,
  // config / formats
  ConfigInvalid,
  KvSyntax,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code carries the failure class
/// and what() carries the detail (diagnostics, field path, key name).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace scproof

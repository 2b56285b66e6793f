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
#include "scproof/error.hpp"

namespace scproof {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CompilerNotFound: return "CompilerNotFound";
    case ErrorCode::CompileFailed: return "CompileFailed";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::MalformedAst: return "MalformedAst";
    case ErrorCode::SourceNotFound: return "SourceNotFound";
    case ErrorCode::NoTemplateForKind: return "NoTemplateForKind";
    case ErrorCode::AnchorMissing: return "AnchorMissing";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::EmptyReply: return "EmptyReply";
    case ErrorCode::TemplateInvalid: return "TemplateInvalid";
    case ErrorCode::AuthFailed: return "AuthFailed";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::NoStubForKey: return "NoStubForKey";
    case ErrorCode::UnparseableNormalization: return "UnparseableNormalization";
    case ErrorCode::LlmDisabled: return "LlmDisabled";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::LayoutConflict: return "LayoutConflict";
    case ErrorCode::BackendNotFound: return "BackendNotFound";
    case ErrorCode::OutputUnparseable: return "OutputUnparseable";
    case ErrorCode::JsonMalformed: return "JsonMalformed";
    case ErrorCode::RoleMismatch: return "RoleMismatch";
    case ErrorCode::TableInvalid: return "TableInvalid";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::KvSyntax: return "KvSyntax";
  }
  return "Unknown";
}

}  // namespace scproof

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

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

// OpenAI-compatible chat-completion client with an offline stub mode.
namespace scproof {

enum class LlmMode { Live, OfflineStub, Disabled };

std::string_view to_string(LlmMode mode);
std::optional<LlmMode> parse_llm_mode(std::string_view text);

struct LlmConfig {
  std::string endpoint_url = "https://api.openai.com/v1";
  std::string model_id = "gpt-4o";
  std::string api_key_env_name = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_output_tokens = 4096;
  std::chrono::seconds request_timeout{120};
  LlmMode mode = LlmMode::Disabled;
  std::filesystem::path stub_dir;
  /// Simultaneous requests allowed per client.
  int max_in_flight = 2;
  /// First retry delay; doubles per attempt.
  std::chrono::milliseconds backoff{500};
};

struct PromptBundle {
  std::string system;
  std::string user;
  // Logging and stub lookup only; never sent to the endpoint.
  std::string defect_kind;
  std::string contract_name;
};

/// Per-method status reported by the normalizer ("pass" | "fail" | "error").
using NormalizedOutcomes = std::map<std::string, std::string>;

/// Sink for request/response transcripts. Text handed to it has already been
/// scrubbed of the API key.
using LlmLogSink = std::function<void(const std::string&)>;

class LlmClient {
 public:
  explicit LlmClient(LlmConfig config, LlmLogSink log = {});
  ~LlmClient();

  LlmClient(const LlmClient&) = delete;
  LlmClient& operator=(const LlmClient&) = delete;

  const LlmConfig& config() const { return config_; }

  /// Live completion. Errors: AuthFailed, RateLimited, TransportError,
  /// MalformedResponse, Timeout, LlmDisabled.
  std::string complete(const PromptBundle& bundle);

  /// Dispatches on config().mode: live request, stub lookup, or LlmDisabled.
  std::string ask(const PromptBundle& bundle);

  /// Number of HTTP requests attempted so far (retries included).
  int requests_sent() const;

 private:
  std::string post_once(const std::string& body, const std::string& key);
  void log(const std::string& text, const std::string& key) const;

  LlmConfig config_;
  LlmLogSink log_;
  std::counting_semaphore<64> in_flight_;
  mutable std::mutex count_mutex_;
  int requests_ = 0;
};

/// Filename of the canned reply for a (defect kind, contract) key.
std::string stub_file_name(std::string_view defect_kind, std::string_view contract_name);

/// Reads `<kind>__<contract>.reply.txt` from `stub_dir`. Errors: NoStubForKey.
std::string complete_offline(const PromptBundle& bundle, const std::filesystem::path& stub_dir);

/// Prompt asking the model to restate a runner log as `<method> <status>`
/// lines. Stub lookups use the key ("Normalization", `contract_name`).
PromptBundle normalization_prompt(std::string_view raw_log, std::string_view contract_name);

/// Parses a normalization reply. Every non-empty line must read
/// `<method> <pass|fail|error>`; otherwise UnparseableNormalization.
NormalizedOutcomes parse_normalization_reply(std::string_view reply);

/// Asks the model to normalize an unstructured runner log. An empty log is
/// rejected before any request (UnparseableNormalization).
NormalizedOutcomes normalize_runner_output(LlmClient& client, std::string_view raw_log,
                                           std::string_view contract_name = "runner");

}  // namespace scproof

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
#include "scproof/llm.hpp"

#include <httplib.h>

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <regex>
#include <thread>

#include "scproof/error.hpp"
#include "scproof/text.hpp"

namespace scproof {

namespace {

constexpr int kMaxAttempts = 3;
constexpr std::string_view kRedacted = "[REDACTED]";

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string base_path;
};

Endpoint split_endpoint(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw Error(ErrorCode::ConfigInvalid, "endpoint_url '" + url + "' is not http(s)");
  Endpoint e{m[1].str(), m[2].matched ? m[2].str() : ""};
  while (!e.base_path.empty() && e.base_path.back() == '/') e.base_path.pop_back();
  return e;
}

std::string redact(std::string text, const std::string& key) {
  if (!key.empty()) text = text::replace_all(std::move(text), key, kRedacted);
  return text;
}

// Retry only failures a later attempt can plausibly fix.
bool retryable(ErrorCode code) {
  return code == ErrorCode::RateLimited || code == ErrorCode::TransportError || code == ErrorCode::Timeout;
}

}  // namespace

std::string_view to_string(LlmMode mode) {
  switch (mode) {
    case LlmMode::Live: return "live";
    case LlmMode::OfflineStub: return "offline_stub";
    case LlmMode::Disabled: return "disabled";
  }
  return "disabled";
}

std::optional<LlmMode> parse_llm_mode(std::string_view text) {
  if (text == "live") return LlmMode::Live;
  if (text == "offline_stub" || text == "offline-stub" || text == "stub") return LlmMode::OfflineStub;
  if (text == "disabled") return LlmMode::Disabled;
  return std::nullopt;
}

LlmClient::LlmClient(LlmConfig config, LlmLogSink log)
    : config_(std::move(config)), log_(std::move(log)), in_flight_(std::clamp(config_.max_in_flight, 1, 64)) {
  if (config_.temperature < 0.0 || config_.temperature > 2.0)
    throw Error(ErrorCode::ConfigInvalid, "temperature must lie in [0, 2]");
  if (config_.max_output_tokens <= 0) throw Error(ErrorCode::ConfigInvalid, "max_output_tokens must be positive");
  if (config_.request_timeout.count() <= 0) throw Error(ErrorCode::ConfigInvalid, "request_timeout must be positive");
}

LlmClient::~LlmClient() = default;

int LlmClient::requests_sent() const {
  std::lock_guard lock(count_mutex_);
  return requests_;
}

void LlmClient::log(const std::string& text, const std::string& key) const {
  if (log_) log_(redact(text, key));
}

std::string LlmClient::ask(const PromptBundle& bundle) {
  switch (config_.mode) {
    case LlmMode::Live: return complete(bundle);
    case LlmMode::OfflineStub: {
      auto reply = complete_offline(bundle, config_.stub_dir);
      log("stub " + bundle.defect_kind + "/" + bundle.contract_name + "\n" + reply, "");
      return reply;
    }
    case LlmMode::Disabled: break;
  }
  throw Error(ErrorCode::LlmDisabled, bundle.defect_kind + "/" + bundle.contract_name);
}

std::string LlmClient::complete(const PromptBundle& bundle) {
  if (config_.mode != LlmMode::Live) throw Error(ErrorCode::LlmDisabled, "client is not in live mode");
  if (text::trim(bundle.system).empty() || text::trim(bundle.user).empty())
    throw Error(ErrorCode::ConfigInvalid, "prompt system and user text must be non-empty");
  const char* key_value = std::getenv(config_.api_key_env_name.c_str());
  if (!key_value || !*key_value) throw Error(ErrorCode::AuthFailed, config_.api_key_env_name + " is not set");
  const std::string key(key_value);

  const nlohmann::json body = {
      {"model", config_.model_id},
      {"temperature", config_.temperature},
      {"max_tokens", config_.max_output_tokens},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", bundle.system}},
                              {{"role", "user"}, {"content", bundle.user}}})},
  };
  const std::string payload = body.dump();

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<64>& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  auto delay = config_.backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      log("request " + bundle.defect_kind + "/" + bundle.contract_name + " attempt " + std::to_string(attempt) +
              "\n" + payload,
          key);
      auto reply = post_once(payload, key);
      log("response " + bundle.defect_kind + "/" + bundle.contract_name + "\n" + reply, key);
      return reply;
    } catch (const Error& e) {
      log("failure attempt " + std::to_string(attempt) + ": " + e.what(), key);
      if (!retryable(e.code()) || attempt >= kMaxAttempts) throw;
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

std::string LlmClient::post_once(const std::string& body, const std::string& key) {
  const auto endpoint = split_endpoint(config_.endpoint_url);
  {
    std::lock_guard lock(count_mutex_);
    ++requests_;
  }
  httplib::Client client(endpoint.origin);
  const auto timeout = config_.request_timeout;
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const httplib::Headers headers = {{"Authorization", "Bearer " + key}};

  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(endpoint.base_path + "/chat/completions", headers, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const bool slow = std::chrono::steady_clock::now() - started >= timeout;
    if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && slow))
      throw Error(ErrorCode::Timeout, "no response within " + std::to_string(timeout.count()) + " s");
    throw Error(ErrorCode::TransportError, redact(httplib::to_string(err), key));
  }
  const std::string snippet = redact(res->body.substr(0, 200), key);
  if (res->status == 401 || res->status == 403)
    throw Error(ErrorCode::AuthFailed, "HTTP " + std::to_string(res->status) + ": " + snippet);
  if (res->status == 429) throw Error(ErrorCode::RateLimited, "HTTP 429: " + snippet);
  if (res->status >= 500) throw Error(ErrorCode::TransportError, "HTTP " + std::to_string(res->status) + ": " + snippet);
  if (res->status != 200)
    throw Error(ErrorCode::MalformedResponse, "HTTP " + std::to_string(res->status) + ": " + snippet);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::MalformedResponse, "response body is not JSON");
  }
  const auto ptr = nlohmann::json::json_pointer("/choices/0/message/content");
  if (!doc.contains(ptr) || !doc.at(ptr).is_string())
    throw Error(ErrorCode::MalformedResponse, "missing choices[0].message.content");
  return doc.at(ptr).get<std::string>();
}

std::string stub_file_name(std::string_view defect_kind, std::string_view contract_name) {
  return std::string(defect_kind) + "__" + std::string(contract_name) + ".reply.txt";
}

std::string complete_offline(const PromptBundle& bundle, const std::filesystem::path& stub_dir) {
  const std::string key = bundle.defect_kind + "/" + bundle.contract_name;
  // Keys become file names; anything that is not a plain identifier could
  // escape the stub directory.
  if (!text::is_identifier(bundle.defect_kind) || !text::is_identifier(bundle.contract_name))
    throw Error(ErrorCode::NoStubForKey, key);
  const auto path = stub_dir / stub_file_name(bundle.defect_kind, bundle.contract_name);
  std::error_code ec;
  if (stub_dir.empty() || !std::filesystem::is_regular_file(path, ec)) throw Error(ErrorCode::NoStubForKey, key);
  return text::read_file(path);
}

PromptBundle normalization_prompt(std::string_view raw_log, std::string_view contract_name) {
  PromptBundle b;
  b.defect_kind = "Normalization";
  b.contract_name = std::string(contract_name);
  b.system =
      "You read the console output of a smart-contract test runner and report the outcome of each test method. "
      "Reply with one line per test method that the output mentions, formatted exactly as `<method> <status>` "
      "where status is pass, fail or error. Use fail when a test or proof was refuted, error when it could not "
      "run. Write nothing else.";
  b.user = "Runner output:\n" + std::string(raw_log);
  return b;
}

NormalizedOutcomes parse_normalization_reply(std::string_view reply) {
  static const std::regex line_re(R"(^([A-Za-z_$][A-Za-z0-9_$]*(?:\.[A-Za-z_$][A-Za-z0-9_$]*)?)\s+(pass|fail|error)$)");
  NormalizedOutcomes out;
  for (auto raw : text::split_lines(reply)) {
    const std::string line(text::trim(raw));
    if (line.empty() || line.starts_with("```")) continue;
    std::smatch m;
    if (!std::regex_match(line, m, line_re)) throw Error(ErrorCode::UnparseableNormalization, "bad line: " + line);
    out[m[1].str()] = m[2].str();
  }
  if (out.empty()) throw Error(ErrorCode::UnparseableNormalization, "reply names no test methods");
  return out;
}

NormalizedOutcomes normalize_runner_output(LlmClient& client, std::string_view raw_log,
                                           std::string_view contract_name) {
  if (text::trim(raw_log).empty()) throw Error(ErrorCode::UnparseableNormalization, "empty runner log");
  return parse_normalization_reply(client.ask(normalization_prompt(raw_log, contract_name)));
}

}  // namespace scproof

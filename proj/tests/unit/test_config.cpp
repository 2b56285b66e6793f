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

#include <fstream>

#include "scproof/config.hpp"
#include "scproof/error.hpp"

namespace scproof {
namespace {

namespace fs = std::filesystem;

class ConfigFile : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("scproof-config-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& text) {
    const auto p = dir_ / "scproof.conf";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

TEST(Defaults, Snapshot) {
  const auto c = load_config(std::nullopt, {}, {});
  EXPECT_EQ(c.backend_mode, BackendMode::Auto);
  EXPECT_EQ(c.fuzz_runs, 256);
  EXPECT_FALSE(c.offline);
  EXPECT_FALSE(c.allow_local_tools);
  EXPECT_TRUE(c.compile_check);
  EXPECT_EQ(c.enabled_defects.size(), kAllDefectKinds.size());
  EXPECT_EQ(c.llm.mode, LlmMode::Live);
  EXPECT_EQ(c.llm.temperature, 0.0);
  EXPECT_EQ(c.llm.api_key_env_name, "OPENAI_API_KEY");
  EXPECT_TRUE(fs::exists(c.template_dir)) << c.template_dir;
  EXPECT_TRUE(fs::exists(c.forge_std_dir)) << c.forge_std_dir;
}

TEST_F(ConfigFile, OverridesBeatEnvBeatFile) {
  const auto file = write("backend_mode = kontrol\nfuzz_runs = 10\njob_cap = 3\n[llm]\nmodel_id = from-file\n");
  const auto c1 = load_config(file, {}, {});
  EXPECT_EQ(c1.backend_mode, BackendMode::Kontrol);
  EXPECT_EQ(c1.llm.model_id, "from-file");

  const std::map<std::string, std::string> env = {{"SCPROOF_FUZZ_RUNS", "20"}, {"SCPROOF_LLM_MODEL_ID", "from-env"}};
  const auto c2 = load_config(file, {{"backend", "mock"}, {"fuzz_runs", "30"}}, env);
  EXPECT_EQ(c2.backend_mode, BackendMode::Mock);
  EXPECT_EQ(c2.fuzz_runs, 30);
  EXPECT_EQ(c2.llm.model_id, "from-env");
  EXPECT_EQ(c2.job_cap, 3);
}

TEST_F(ConfigFile, RejectsUnknownKeysAndSections) {
  EXPECT_EQ(code_of([&] { load_config(write("colour = blue\n"), {}, {}); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([&] { load_config(write("[forge]\nruns = 3\n"), {}, {}); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([&] { load_config(write("this is not kv\n"), {}, {}); }), ErrorCode::ConfigInvalid);
}

TEST(Validation, BadValues) {
  const std::vector<ConfigLayer> bad = {
      {{"fuzz_runs", "0"}},         {{"fuzz_runs", "-3"}},          {{"fuzz_runs", "many"}},
      {{"job_cap", "0"}},           {{"backend_mode", "hardhat"}},  {{"offline", "sometimes"}},
      {{"llm.temperature", "2.5"}}, {{"llm.mode", "psychic"}},      {{"enabled_defects", "Reentrancy,Nope"}},
      {{"enabled_defects", ""}},    {{"llm.max_output_tokens", "0"}},
  };
  for (const auto& layer : bad)
    EXPECT_EQ(code_of([&] { load_config(std::nullopt, layer, {}); }), ErrorCode::ConfigInvalid)
        << layer.begin()->first << "=" << layer.begin()->second;
}

TEST(Validation, ErrorNamesTheKey) {
  try {
    load_config(std::nullopt, {{"fuzz_runs", "0"}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("fuzz_runs"), std::string::npos);
  }
}

TEST(Env, MappingAndUnknownsIgnored) {
  const auto layer = config_from_env({{"SCPROOF_BACKEND_MODE", "mock"},
                                      {"SCPROOF_LLM_ENDPOINT_URL", "http://x"},
                                      {"SCPROOF_NOT_A_KEY", "1"},
                                      {"PATH", "/bin"}});
  EXPECT_EQ(layer, (ConfigLayer{{"backend_mode", "mock"}, {"llm.endpoint_url", "http://x"}}));
  for (const auto& key : config_keys()) {
    std::string name = "SCPROOF_";
    for (char ch : key) name += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    EXPECT_EQ(config_from_env({{name, "v"}}).count(key), 1u) << name;
  }
}

TEST(Offline, Coercions) {
  const auto plain = load_config(std::nullopt, {{"offline", "true"}}, {});
  EXPECT_EQ(plain.llm.mode, LlmMode::Disabled);
  EXPECT_EQ(plain.backend_mode, BackendMode::Mock);

  const auto stubbed = load_config(std::nullopt, {{"offline", "true"}, {"stub_dir", "/tmp/stubs"}}, {});
  EXPECT_EQ(stubbed.llm.mode, LlmMode::OfflineStub);
  EXPECT_EQ(stubbed.llm.stub_dir, fs::path("/tmp/stubs"));

  const auto local = load_config(std::nullopt, {{"offline", "true"}, {"backend", "forge"}, {"allow_local_tools", "true"}}, {});
  EXPECT_EQ(local.backend_mode, BackendMode::Forge);
}

TEST(Offline, Conflicts) {
  EXPECT_EQ(code_of([] { load_config(std::nullopt, {{"offline", "true"}, {"llm.mode", "live"}}, {}); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { load_config(std::nullopt, {{"offline", "true"}, {"backend", "kontrol"}}, {}); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { load_config(std::nullopt, {{"llm.mode", "offline_stub"}}, {}); }), ErrorCode::ConfigInvalid);
}

TEST(Digest, StableAndSensitive) {
  const auto a = load_config(std::nullopt, {}, {});
  EXPECT_EQ(config_digest(a), config_digest(load_config(std::nullopt, {}, {})));
  EXPECT_EQ(config_digest(a).rfind("sha256:", 0), 0u);
  EXPECT_EQ(config_digest(a).size(), 7u + 64u);

  // Machine-local settings leave the digest alone.
  const auto local = load_config(std::nullopt, {{"workdir", "/elsewhere"}, {"job_cap", "9"}, {"verbosity", "2"},
                                                {"solc_path", "/opt/solc"}},
                                 {});
  EXPECT_EQ(config_digest(local), config_digest(a));

  for (const ConfigLayer& change : std::vector<ConfigLayer>{{{"fuzz_runs", "64"}},
                                                            {{"backend", "mock"}},
                                                            {{"llm.model_id", "other"}},
                                                            {{"enabled_defects", "Reentrancy"}}})
    EXPECT_NE(config_digest(load_config(std::nullopt, change, {})), config_digest(a)) << change.begin()->first;
}

TEST(Describe, ListsEveryKeyWithoutSecrets) {
  const std::string secret = "sk-describe-0b1c2d3e";
  ::setenv("SCPROOF_DESCRIBE_KEY", secret.c_str(), 1);
  const auto c = load_config(std::nullopt, {{"llm.api_key_env_name", "SCPROOF_DESCRIBE_KEY"}}, {});
  const auto text = "\n" + describe(c);
  ::unsetenv("SCPROOF_DESCRIBE_KEY");
  EXPECT_EQ(text.find(secret), std::string::npos);
  EXPECT_NE(text.find("api_key_env_name = SCPROOF_DESCRIBE_KEY"), std::string::npos);
  for (const auto& key : config_keys()) {
    if (key == "force" || key == "verbosity") continue;
    const auto leaf = key.rfind("llm.", 0) == 0 ? key.substr(4) : key;
    EXPECT_NE(text.find("\n" + leaf + " = "), std::string::npos) << key;
  }
}

TEST(Names, BackendModes) {
  for (auto m : {BackendMode::Auto, BackendMode::Forge, BackendMode::Kontrol, BackendMode::Mock})
    EXPECT_EQ(parse_backend_mode(to_string(m)), m);
  EXPECT_FALSE(parse_backend_mode("hardhat"));
}

}  // namespace
}  // namespace scproof

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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Flat key/value text format shared by template manifests, verdict tables,
// mock scripts and the pipeline config file.
//
//   # comment
//   key = value
//   [section]          single named section
//   [[group]]          repeated group; every occurrence starts a new entry
//
// Values run to the end of the line. A value wrapped in double quotes is
// unquoted (\" and \\ escapes). Keys are unique within one section.
namespace scproof::kv {

struct Section {
  std::string name;  // empty for the root section
  bool repeated = false;
  std::vector<std::pair<std::string, std::string>> entries;

  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  /// Throws Error(KvSyntax) naming `origin` when the key is absent.
  std::string require(std::string_view key, std::string_view origin) const;
  bool has(std::string_view key) const { return get(key).has_value(); }
};

struct Document {
  std::string origin;
  Section root;
  std::vector<Section> sections;  // in file order

  const Section* table(std::string_view name) const;
  std::vector<const Section*> groups(std::string_view name) const;
};

Document parse(std::string_view text, std::string_view origin = "<memory>");
Document parse_file(const std::filesystem::path& path);

std::string serialize(const Document& doc);

/// Splits "a, b ,c" into {"a","b","c"}; empty items are dropped.
std::vector<std::string> split_list(std::string_view value, char sep = ',');

}  // namespace scproof::kv

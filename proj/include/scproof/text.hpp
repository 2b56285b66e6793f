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
#include <string>
#include <string_view>
#include <vector>

// Small text and file helpers shared across modules.
namespace scproof::text {

std::string_view trim(std::string_view s);
/// Splits on '\n'; a trailing '\r' on each line is dropped.
std::vector<std::string_view> split_lines(std::string_view s);
std::string replace_all(std::string s, std::string_view from, std::string_view to);
bool is_identifier(std::string_view s);
std::string to_lower(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);
/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// A uniquely named file or directory under the system temp directory,
/// removed on destruction unless `keep` is set.
struct TempFile {
  explicit TempFile(std::string_view prefix);
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  std::filesystem::path path;
};

struct TempDir {
  explicit TempDir(std::string_view prefix);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path path;
  bool keep = false;
};

}  // namespace scproof::text

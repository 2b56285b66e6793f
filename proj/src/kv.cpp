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
#include "scproof/kv.hpp"

#include <fstream>
#include <sstream>

#include "scproof/error.hpp"
#include "scproof/text.hpp"

namespace scproof::kv {

namespace {

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::string unquote(std::string_view value, std::string_view origin, std::size_t line) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 1; i + 1 < value.size(); ++i) {
    char c = value[i];
    if (c == '\\') {
      if (i + 2 >= value.size())
        throw Error(ErrorCode::KvSyntax, std::string(origin) + ":" + std::to_string(line) + ": dangling escape");
      char next = value[++i];
      switch (next) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default: out.push_back(next); break;
      }
    } else {
      out.push_back(c);
    }
  }
  return out;
}

bool needs_quotes(std::string_view value) {
  if (value.empty()) return false;
  if (value.front() == ' ' || value.back() == ' ' || value.front() == '\t' || value.back() == '\t') return true;
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') return true;
  return value.find('\n') != std::string_view::npos;
}

std::string quote(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::optional<std::string> Section::get(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

std::string Section::get_or(std::string_view key, std::string_view fallback) const {
  auto v = get(key);
  return v ? *v : std::string(fallback);
}

std::string Section::require(std::string_view key, std::string_view origin) const {
  auto v = get(key);
  if (!v) {
    std::string where = name.empty() ? std::string("top level") : "section [" + name + "]";
    throw Error(ErrorCode::KvSyntax, std::string(origin) + ": missing key '" + std::string(key) + "' in " + where);
  }
  return *v;
}

const Section* Document::table(std::string_view name) const {
  for (const auto& s : sections)
    if (!s.repeated && s.name == name) return &s;
  return nullptr;
}

std::vector<const Section*> Document::groups(std::string_view name) const {
  std::vector<const Section*> out;
  for (const auto& s : sections)
    if (s.repeated && s.name == name) out.push_back(&s);
  return out;
}

Document parse(std::string_view text, std::string_view origin) {
  Document doc;
  doc.origin = std::string(origin);
  Section* current = &doc.root;
  std::size_t line_no = 0;
  for (std::string_view raw : text::split_lines(text)) {
    ++line_no;
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::KvSyntax, std::string(origin) + ":" + std::to_string(line_no) + ": " + why);
    };
    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) fail("unterminated group header");
      std::string name(text::trim(line.substr(2, line.size() - 4)));
      if (!valid_key(name)) fail("bad group name");
      doc.sections.push_back(Section{name, true, {}});
      current = &doc.sections.back();
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      std::string name(text::trim(line.substr(1, line.size() - 2)));
      if (!valid_key(name)) fail("bad section name");
      if (doc.table(name)) fail("duplicate section [" + name + "]");
      doc.sections.push_back(Section{name, false, {}});
      current = &doc.sections.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    std::string key(text::trim(line.substr(0, eq)));
    std::string_view value = text::trim(line.substr(eq + 1));
    if (!valid_key(key)) fail("bad key '" + key + "'");
    if (current->has(key)) fail("duplicate key '" + key + "'");
    std::string stored = (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                             ? unquote(value, origin, line_no)
                             : std::string(value);
    current->entries.emplace_back(std::move(key), std::move(stored));
  }
  return doc;
}

Document parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::string serialize(const Document& doc) {
  std::string out;
  auto emit = [&out](const Section& s) {
    for (const auto& [k, v] : s.entries) {
      out += k;
      out += " = ";
      out += needs_quotes(v) ? quote(v) : v;
      out += '\n';
    }
  };
  emit(doc.root);
  for (const auto& s : doc.sections) {
    if (!out.empty()) out += '\n';
    out += s.repeated ? "[[" + s.name + "]]\n" : "[" + s.name + "]\n";
    emit(s);
  }
  return out;
}

std::vector<std::string> split_list(std::string_view value, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto pos = value.find(sep, start);
    if (pos == std::string_view::npos) pos = value.size();
    auto item = text::trim(value.substr(start, pos - start));
    if (!item.empty()) out.emplace_back(item);
    start = pos + 1;
  }
  return out;
}

}  // namespace scproof::kv

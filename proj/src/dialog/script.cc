// Copyright 2026 The Symcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "symcheck/dialog/script.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symcheck/common/errors.h"

namespace symcheck::dialog {
namespace {

constexpr std::array<std::string_view, kScriptKeyCount> kKeyNames = {
    "GREETING", "REGREETING", "CONSENT_Q", "FEVER_Q", "RESP_Q", "REPROMPT", "DETAIL_Q", "CLOSING",
};

}  // namespace

std::string_view script_key_name(ScriptKey key) { return kKeyNames[static_cast<std::size_t>(key)]; }

ScriptKey parse_script_key(std::string_view name) {
  for (std::size_t i = 0; i < kKeyNames.size(); ++i) {
    if (kKeyNames[i] == name) return static_cast<ScriptKey>(i);
  }
  throw ParseError("unknown script key: " + std::string(name));
}

Script::Script(std::array<std::string, kScriptKeyCount> lines, std::int64_t version)
    : lines_(std::move(lines)), version_(version) {
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (lines_[i].empty()) {
      throw ContractViolation("script line " + std::string(kKeyNames[i]) + " is empty");
    }
  }
}

Script Script::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("script table: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("lines") || !doc["lines"].is_object()) {
    throw ParseError("script table: expected an object with a \"lines\" object");
  }
  std::array<std::string, kScriptKeyCount> lines;
  for (const auto& [name, text] : doc["lines"].items()) {
    if (!text.is_string()) throw ParseError("script table: line " + name + " is not a string");
    lines[static_cast<std::size_t>(parse_script_key(name))] = text.get<std::string>();
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) throw ParseError("script table: missing key " + std::string(kKeyNames[i]));
  }
  return Script(std::move(lines), doc.value("version", std::int64_t{1}));
}

Script Script::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open script table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace symcheck::dialog

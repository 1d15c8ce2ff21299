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

#ifndef SYMCHECK_DIALOG_SCRIPT_H_
#define SYMCHECK_DIALOG_SCRIPT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace symcheck::dialog {

enum class ScriptKey {
  kGreeting,
  kRegreeting,
  kConsentQ,
  kFeverQ,
  kRespQ,
  kReprompt,
  kDetailQ,
  kClosing,
};

inline constexpr std::size_t kScriptKeyCount = 8;

std::string_view script_key_name(ScriptKey key);
ScriptKey parse_script_key(std::string_view name);

// Versioned table of system utterances. Every key must be present.
class Script {
 public:
  Script(std::array<std::string, kScriptKeyCount> lines, std::int64_t version);

  static Script load(const std::filesystem::path& path);
  static Script parse(std::string_view json_text);

  const std::string& line(ScriptKey key) const { return lines_[static_cast<std::size_t>(key)]; }
  std::int64_t version() const { return version_; }

 private:
  std::array<std::string, kScriptKeyCount> lines_;
  std::int64_t version_;
};

}  // namespace symcheck::dialog

#endif  // SYMCHECK_DIALOG_SCRIPT_H_

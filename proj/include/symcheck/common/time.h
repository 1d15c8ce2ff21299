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

#ifndef SYMCHECK_COMMON_TIME_H_
#define SYMCHECK_COMMON_TIME_H_

#include <chrono>
#include <string>
#include <string_view>

namespace symcheck {

// Single campaign clock, UTC, second resolution.
using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

// "2020-03-09T10:00:00Z"
std::string format_timestamp(Timestamp ts);
Timestamp parse_timestamp(std::string_view text);

// "2020-03-09"
std::string format_date(Date day);
Date parse_date(std::string_view text);

inline Date date_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

inline Timestamp at_hour(Date day, int hour) {
  return Timestamp{day} + std::chrono::hours{hour};
}

}  // namespace symcheck

#endif  // SYMCHECK_COMMON_TIME_H_

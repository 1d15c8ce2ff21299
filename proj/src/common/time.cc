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

#include "symcheck/common/time.h"

#include <cstdio>

#include "symcheck/common/errors.h"

namespace symcheck {

using namespace std::chrono;

std::string format_timestamp(Timestamp ts) {
  const Date day = date_of(ts);
  const year_month_day ymd{day};
  const hh_mm_ss hms{ts - Timestamp{day}};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail = 0;
  const std::string str(text);
  const int n = std::sscanf(str.c_str(), "%d-%u-%uT%u:%u:%u%c", &y, &mo, &d, &h, &mi, &s, &tail);
  if (n == 3 && str.size() == 10) return Timestamp{parse_date(str)};
  if (n != 7 || tail != 'Z' || h > 23 || mi > 59 || s > 60) {
    throw ParseError("bad timestamp: " + str);
  }
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) throw ParseError("bad timestamp: " + str);
  return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_date(Date day) {
  const year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Date parse_date(std::string_view text) {
  int y = 0;
  unsigned mo = 0, d = 0;
  const std::string str(text);
  if (str.size() != 10 || std::sscanf(str.c_str(), "%d-%u-%u", &y, &mo, &d) != 3) {
    throw ParseError("bad date: " + str);
  }
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) throw ParseError("bad date: " + str);
  return sys_days{ymd};
}

}  // namespace symcheck

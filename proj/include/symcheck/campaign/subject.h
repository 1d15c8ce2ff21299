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

#ifndef SYMCHECK_CAMPAIGN_SUBJECT_H_
#define SYMCHECK_CAMPAIGN_SUBJECT_H_

#include <string>

#include "symcheck/common/time.h"

namespace symcheck::campaign {

struct Subject {
  std::string subject_id;
  Date enrolled_at{};
  int window_days = 14;
  std::string phone_label;

  // enrolled_at <= day < enrolled_at + window_days
  bool active_on(Date day) const {
    return day >= enrolled_at && day < enrolled_at + std::chrono::days{window_days};
  }
};

}  // namespace symcheck::campaign

#endif  // SYMCHECK_CAMPAIGN_SUBJECT_H_

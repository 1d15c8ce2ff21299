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

#ifndef SYMCHECK_IO_JSON_H_
#define SYMCHECK_IO_JSON_H_

// JSON mappings for the domain types. Field names are part of the wire
// format (event log, HTTP API, export files) and must stay stable.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "symcheck/campaign/campaign.h"
#include "symcheck/dialog/dialog.h"
#include "symcheck/nlu/nlu.h"
#include "symcheck/popsim/popsim.h"
#include "symcheck/triage/triage.h"

namespace symcheck {

using Json = nlohmann::json;

// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Parses one JSON document per non-empty line.
std::vector<Json> parse_json_lines(std::string_view text);

// Typed field access that reports the missing or mistyped field.
const Json& require(const Json& obj, const char* field);

}  // namespace symcheck

namespace symcheck::nlu {
void to_json(Json& j, const NluResult& r);
void from_json(const Json& j, NluResult& r);
void to_json(Json& j, const LabeledExample& e);
void from_json(const Json& j, LabeledExample& e);

// Lexicon file: {"version", "smoothing", "counts": {class: {token: count}}}.
Json lexicon_to_json(const Lexicon& lexicon);
Lexicon lexicon_from_json(const Json& j);
Lexicon load_lexicon(const std::filesystem::path& path);
}  // namespace symcheck::nlu

namespace symcheck::dialog {
void to_json(Json& j, const Utterance& u);
void from_json(const Json& j, Utterance& u);
void to_json(Json& j, const Slots& s);
void from_json(const Json& j, Slots& s);
void to_json(Json& j, const CallSession& s);
void from_json(const Json& j, CallSession& s);

// One line per utterance: {session_id, seq, speaker, text, ts, class, p_top1}.
std::string transcript_json_lines(const CallSession& session);
}  // namespace symcheck::dialog

namespace symcheck::triage {
void to_json(Json& j, const Policy& p);
void from_json(const Json& j, Policy& p);
void to_json(Json& j, const UtteranceLabel& l);
void from_json(const Json& j, UtteranceLabel& l);
void to_json(Json& j, const ReviewDecision& d);
void from_json(const Json& j, ReviewDecision& d);
void to_json(Json& j, const EscalationRecord& r);
void from_json(const Json& j, EscalationRecord& r);
void to_json(Json& j, const PoolItem& item);
void from_json(const Json& j, PoolItem& item);
}  // namespace symcheck::triage

namespace symcheck::campaign {
void to_json(Json& j, const Subject& s);
void from_json(const Json& j, Subject& s);
void to_json(Json& j, const CampaignConfig& c);
void from_json(const Json& j, CampaignConfig& c);
void to_json(Json& j, const CallAttempt& a);
void from_json(const Json& j, CallAttempt& a);
void to_json(Json& j, const TurnStats& t);
void from_json(const Json& j, TurnStats& t);
void to_json(Json& j, const DayStats& d);
void from_json(const Json& j, DayStats& d);
void to_json(Json& j, const MetricsReport& r);
}  // namespace symcheck::campaign

namespace symcheck::popsim {
void to_json(Json& j, const Persona& p);
void from_json(const Json& j, Persona& p);
void to_json(Json& j, const PopulationConfig& c);
void from_json(const Json& j, PopulationConfig& c);
}  // namespace symcheck::popsim

#endif  // SYMCHECK_IO_JSON_H_

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

#include "symcheck/nlu/nlu.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "symcheck/common/errors.h"

namespace symcheck::nlu {

std::string_view intent_name(Intent intent) {
  switch (intent) {
    case Intent::kYes:
      return "YES";
    case Intent::kNo:
      return "NO";
    case Intent::kOther:
      return "OTHER";
  }
  return "OTHER";
}

Intent parse_intent(std::string_view name) {
  if (name == "YES") return Intent::kYes;
  if (name == "NO") return Intent::kNo;
  if (name == "OTHER") return Intent::kOther;
  throw ParseError("unknown intent class: " + std::string(name));
}

NluResult from_logits(const std::array<double, 3>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::array<double, 3> e{};
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    e[i] = std::exp(logits[i] - top);
    total += e[i];
  }
  NluResult r;
  for (std::size_t i = 0; i < 3; ++i) r.scores[i] = e[i] / total;

  // Tie-break order: OTHER, YES, NO.
  constexpr std::array<Intent, 3> kPreference = {Intent::kOther, Intent::kYes, Intent::kNo};
  r.top1 = kPreference[0];
  for (Intent c : kPreference) {
    if (logits[static_cast<std::size_t>(c)] > logits[static_cast<std::size_t>(r.top1)]) r.top1 = c;
  }
  r.p_top1 = r.score(r.top1);
  double second = 0.0;
  for (Intent c : kAllIntents) {
    if (c != r.top1) second = std::max(second, r.score(c));
  }
  r.margin = std::max(0.0, r.p_top1 - second);
  return r;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto ch = static_cast<unsigned char>(raw);
    if (std::isspace(ch)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!std::ispunct(ch)) {
      current.push_back(static_cast<char>(std::tolower(ch)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Lexicon Lexicon::from_counts(std::array<TokenCounts, 3> counts, double smoothing,
                             std::int64_t version) {
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
    throw ContractViolation("lexicon smoothing must be positive and finite");
  }
  for (const auto& per_class : counts) {
    for (const auto& [token, n] : per_class) {
      if (n < 0) throw ContractViolation("negative count for token '" + token + "'");
    }
  }
  Lexicon lex;
  lex.counts_ = std::move(counts);
  lex.smoothing_ = smoothing;
  lex.version_ = version;
  lex.rebuild_weights();
  return lex;
}

Lexicon Lexicon::from_weights(std::array<TokenWeights, 3> weights, std::int64_t version) {
  for (const auto& per_class : weights) {
    for (const auto& [token, w] : per_class) {
      if (!std::isfinite(w)) throw ContractViolation("non-finite weight for token '" + token + "'");
    }
  }
  Lexicon lex;
  lex.weights_ = std::move(weights);
  lex.version_ = version;
  return lex;
}

double Lexicon::weight(Intent intent, std::string_view token) const {
  const auto& w = weights_[static_cast<std::size_t>(intent)];
  const auto it = w.find(token);
  return it == w.end() ? 0.0 : it->second;
}

std::size_t Lexicon::vocabulary_size() const {
  std::set<std::string_view> vocab;
  for (const auto& per_class : counts_) {
    for (const auto& [token, n] : per_class) vocab.insert(token);
  }
  return vocab.size();
}

void Lexicon::rebuild_weights() {
  std::set<std::string, std::less<>> vocab;
  for (const auto& per_class : counts_) {
    for (const auto& [token, n] : per_class) vocab.insert(token);
  }
  const double v = static_cast<double>(vocab.size());
  for (std::size_t c = 0; c < 3; ++c) {
    double class_total = 0.0;
    for (const auto& [token, n] : counts_[c]) class_total += static_cast<double>(n);
    const double denom = class_total + smoothing_ * v;
    TokenWeights w;
    for (const auto& token : vocab) {
      const auto it = counts_[c].find(token);
      const double n = it == counts_[c].end() ? 0.0 : static_cast<double>(it->second);
      w.emplace(token, std::log((n + smoothing_) / denom));
    }
    weights_[c] = std::move(w);
  }
}

NluResult classify(const Lexicon& lexicon, std::string_view text) {
  std::array<double, 3> logits{};
  for (const auto& token : tokenize(text)) {
    for (Intent c : kAllIntents) logits[static_cast<std::size_t>(c)] += lexicon.weight(c, token);
  }
  return from_logits(logits);
}

Lexicon train_update(const Lexicon& lexicon, std::span<const LabeledExample> examples) {
  if (examples.empty()) throw ContractViolation("train_update requires at least one example");
  Lexicon next = lexicon;
  for (const auto& ex : examples) {
    auto& per_class = next.counts_[static_cast<std::size_t>(ex.label)];
    for (auto& token : tokenize(ex.text)) ++per_class[std::move(token)];
  }
  next.version_ = lexicon.version_ + 1;
  next.rebuild_weights();
  return next;
}

double uncertainty(const NluResult& result, Scorer scorer) {
  switch (scorer) {
    case Scorer::kTop1:
      return 1.0 - result.p_top1;
    case Scorer::kMargin:
      return 1.0 - result.margin;
  }
  return 1.0 - result.p_top1;
}

}  // namespace symcheck::nlu

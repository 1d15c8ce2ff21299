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

#ifndef SYMCHECK_NLU_NLU_H_
#define SYMCHECK_NLU_NLU_H_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symcheck::nlu {

// Closed intent set for polar questions. OTHER is the reject class used for
// non-answers; it triggers a reprompt.
enum class Intent { kYes = 0, kNo = 1, kOther = 2 };

inline constexpr std::array<Intent, 3> kAllIntents = {Intent::kYes, Intent::kNo, Intent::kOther};

std::string_view intent_name(Intent intent);
Intent parse_intent(std::string_view name);

struct NluResult {
  std::array<double, 3> scores{};  // indexed by Intent
  Intent top1 = Intent::kOther;
  double p_top1 = 0.0;
  double margin = 0.0;  // p_top1 - p_second

  double score(Intent intent) const { return scores[static_cast<std::size_t>(intent)]; }
};

// Normalizes logits into an NluResult. Ties for the maximum resolve to OTHER
// first, then YES, then NO.
NluResult from_logits(const std::array<double, 3>& logits);

// Lowercase, strip ASCII punctuation (apostrophes included, so "don't"
// becomes "dont"), split on whitespace.
std::vector<std::string> tokenize(std::string_view text);

enum class ExampleSource { kSeed, kOperator };

struct LabeledExample {
  std::string text;
  Intent label = Intent::kOther;
  ExampleSource source = ExampleSource::kOperator;
};

// Per-class token weights for the bag-of-words log-linear classifier.
//
// A lexicon is either count-backed, in which case every weight is the
// Laplace-smoothed log likelihood
//   log((count(c, t) + smoothing) / (count(c) + smoothing * |vocab|)),
// or built from explicit weights (tests and hand-tuned tables). Training
// always rebuilds the weights from the accumulated counts.
class Lexicon {
 public:
  using TokenCounts = std::map<std::string, std::int64_t, std::less<>>;
  using TokenWeights = std::map<std::string, double, std::less<>>;

  Lexicon() = default;

  static Lexicon from_counts(std::array<TokenCounts, 3> counts, double smoothing = 1.0,
                             std::int64_t version = 1);
  static Lexicon from_weights(std::array<TokenWeights, 3> weights, std::int64_t version = 1);

  // Missing tokens weigh 0.
  double weight(Intent intent, std::string_view token) const;

  const TokenCounts& counts(Intent intent) const { return counts_[static_cast<std::size_t>(intent)]; }
  const TokenWeights& weights(Intent intent) const {
    return weights_[static_cast<std::size_t>(intent)];
  }
  double smoothing() const { return smoothing_; }
  std::int64_t version() const { return version_; }
  std::size_t vocabulary_size() const;

 private:
  friend Lexicon train_update(const Lexicon& lexicon, std::span<const LabeledExample> examples);

  void rebuild_weights();

  std::array<TokenCounts, 3> counts_{};
  std::array<TokenWeights, 3> weights_{};
  double smoothing_ = 1.0;
  std::int64_t version_ = 0;
};

NluResult classify(const Lexicon& lexicon, std::string_view text);

// Adds the batch's token counts to the lexicon's counts and rebuilds all
// weights. The version strictly increases. Throws ContractViolation on an
// empty batch.
Lexicon train_update(const Lexicon& lexicon, std::span<const LabeledExample> examples);

enum class Scorer { kTop1, kMargin };

// 1 - p_top1 for kTop1; 1 - margin for kMargin.
double uncertainty(const NluResult& result, Scorer scorer = Scorer::kTop1);

}  // namespace symcheck::nlu

#endif  // SYMCHECK_NLU_NLU_H_

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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "symcheck/common/errors.h"
#include "symcheck/io/json.h"
#include "symcheck/nlu/nlu.h"

namespace symcheck::nlu {
namespace {

Lexicon seed_lexicon() { return load_lexicon(SYMCHECK_DATA_DIR "/seed_lexicon.json"); }

TEST_CASE("empty lexicon and empty text give uniform scores") {
  NluResult r = classify(Lexicon{}, "");
  for (double s : r.scores) CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.top1 == Intent::kOther);
  CHECK(uncertainty(r) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("single weighted token matches direct softmax") {
  Lexicon lex = Lexicon::from_weights({Lexicon::TokenWeights{{"yes", 2.0}}, {}, {}});
  NluResult r = classify(lex, "yes");
  double e2 = std::exp(2.0);
  CHECK(r.score(Intent::kYes) == doctest::Approx(e2 / (e2 + 2.0)));
  CHECK(r.score(Intent::kNo) == doctest::Approx(1.0 / (e2 + 2.0)));
  CHECK(r.score(Intent::kYes) == doctest::Approx(0.787).epsilon(1e-3));
  CHECK(r.top1 == Intent::kYes);
  CHECK(uncertainty(r) == doctest::Approx(0.213).epsilon(1e-3));
  CHECK(uncertainty(r, Scorer::kMargin) == doctest::Approx(1.0 - r.margin));
}

TEST_CASE("uncertainty of a certain result is zero") {
  NluResult r = from_logits({800.0, 0.0, 0.0});
  CHECK(r.p_top1 == doctest::Approx(1.0));
  CHECK(uncertainty(r) == doctest::Approx(0.0));
}

TEST_CASE("seed lexicon accepts the cooperative answers") {
  Lexicon lex = seed_lexicon();
  NluResult r = classify(lex, "No. I don't");
  CHECK(r.top1 == Intent::kNo);
  CHECK(r.p_top1 >= 0.7);
  CHECK(classify(lex, "Yes.").top1 == Intent::kYes);
  CHECK(classify(lex, "No.").top1 == Intent::kNo);
  CHECK(classify(lex, "Sorry, can you repeat that?").top1 == Intent::kOther);
}

TEST_CASE("tokenizer") {
  CHECK(tokenize("No. I DON'T  know!") == std::vector<std::string>{"no", "i", "dont", "know"});
  CHECK(tokenize("  ").empty());
}

TEST_CASE("ties resolve toward OTHER") {
  CHECK(from_logits({1.0, 1.0, 1.0}).top1 == Intent::kOther);
  CHECK(from_logits({1.0, 1.0, 0.0}).top1 == Intent::kYes);
}

TEST_CASE("train_update raises the labeled class") {
  Lexicon lex = seed_lexicon();
  std::vector<LabeledExample> batch{{"yep", Intent::kYes, ExampleSource::kOperator}};
  Lexicon next = train_update(lex, batch);
  CHECK(next.version() > lex.version());
  CHECK(classify(next, "yep").score(Intent::kYes) > classify(lex, "yep").score(Intent::kYes));
  CHECK(lex.counts(Intent::kYes).at("yep") + 1 == next.counts(Intent::kYes).at("yep"));
}

TEST_CASE("train_update rejects an empty batch") {
  CHECK_THROWS_AS(train_update(seed_lexicon(), std::vector<LabeledExample>{}), ContractViolation);
}

TEST_CASE("train_update weights are smoothed log likelihoods") {
  Lexicon lex = Lexicon::from_counts({Lexicon::TokenCounts{{"yes", 3}}, {{"no", 1}}, {}}, 1.0);
  std::vector<LabeledExample> batch{{"yes no", Intent::kNo, ExampleSource::kOperator}};
  Lexicon next = train_update(lex, batch);
  // vocab {yes, no}; NO counts yes:1 no:2, total 3
  CHECK(next.weight(Intent::kNo, "no") == doctest::Approx(std::log(3.0 / 5.0)));
  CHECK(next.weight(Intent::kNo, "yes") == doctest::Approx(std::log(2.0 / 5.0)));
  CHECK(next.weight(Intent::kYes, "yes") == doctest::Approx(std::log(4.0 / 5.0)));
  CHECK(next.weight(Intent::kOther, "yes") == doctest::Approx(std::log(1.0 / 2.0)));
}

TEST_CASE("train_update is order insensitive within a batch") {
  std::vector<LabeledExample> batch{{"yes sure", Intent::kYes, ExampleSource::kOperator},
                                    {"nothing like that", Intent::kNo, ExampleSource::kOperator},
                                    {"hold on", Intent::kOther, ExampleSource::kOperator},
                                    {"fine thanks", Intent::kNo, ExampleSource::kOperator}};
  Lexicon a = train_update(seed_lexicon(), batch);
  std::reverse(batch.begin(), batch.end());
  Lexicon b = train_update(seed_lexicon(), batch);
  for (Intent c : kAllIntents) {
    CHECK(a.counts(c) == b.counts(c));
    CHECK(a.weights(c) == b.weights(c));
  }
}

TEST_CASE("scores are normalized and bag-of-words") {
  Lexicon lex = seed_lexicon();
  std::mt19937_64 rng(11);
  std::vector<std::string> words{"yes", "no", "not", "sure", "what", "hello", "fine",
                                 "nothing", "um", "xyzzy", "dont", "go", "ahead"};
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> toks;
    std::size_t n = rng() % 7;
    for (std::size_t j = 0; j < n; ++j) toks.push_back(words[rng() % words.size()]);
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& w : v) s += w + " ";
      return s;
    };
    NluResult r = classify(lex, join(toks));
    double sum = 0;
    for (double s : r.scores) {
      CHECK(s > 0.0);
      CHECK(s < 1.0);
      sum += s;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    std::shuffle(toks.begin(), toks.end(), rng);
    NluResult p = classify(lex, join(toks));
    for (std::size_t c = 0; c < 3; ++c) CHECK(p.scores[c] == doctest::Approx(r.scores[c]).epsilon(1e-12));
  }
}

TEST_CASE("raising a present token's weight never lowers its class score") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(-3, 3);
  for (int i = 0; i < 200; ++i) {
    std::array<Lexicon::TokenWeights, 3> ws;
    for (auto& m : ws) m = {{"a", w(rng)}, {"b", w(rng)}};
    Intent c = kAllIntents[rng() % 3];
    NluResult before = classify(Lexicon::from_weights(ws), "a b a");
    ws[static_cast<std::size_t>(c)]["a"] += std::abs(w(rng));
    NluResult after = classify(Lexicon::from_weights(ws), "a b a");
    CHECK(after.score(c) >= before.score(c));
  }
}

TEST_CASE("lexicon json round trip") {
  Lexicon lex = seed_lexicon();
  Lexicon back = lexicon_from_json(lexicon_to_json(lex));
  CHECK(back.version() == lex.version());
  for (Intent c : kAllIntents) CHECK(back.weights(c) == lex.weights(c));
}

}  // namespace
}  // namespace symcheck::nlu

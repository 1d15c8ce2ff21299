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

#include <cmath>
#include <random>
#include <vector>

#include "symcheck/common/errors.h"
#include "symcheck/spread/oracle.h"
#include "symcheck/spread/spread.h"
#include "symcheck/spread/spread_json.h"

namespace symcheck::spread {
namespace {

using FV = FeatureValue;

Observation obs(std::string id, std::vector<FV> f, bool confirmed = false) {
  return Observation{std::move(id), std::move(f), confirmed};
}

bool rel_close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

// mpmath exact enumeration at 50 digits, see tests/oracle/spread_reference.py.
constexpr double kTwoSmellP = 0.59355676005801969616;
constexpr double kTwoSmellQ = 0.076589816016489808382;
constexpr double kTwoSmellZ = 0.16276051606992900221;

TEST_CASE("person likelihoods") {
  const auto fm = FeatureModel::smell_loss();
  auto l = person_likelihoods(obs("a", {FV::kMissing}), fm);
  CHECK(l.a == 1.0);
  CHECK(l.b == 1.0);
  l = person_likelihoods(obs("a", {FV::kPresent}), fm);
  CHECK(l.a == doctest::Approx(0.65));
  CHECK(l.b == doctest::Approx(0.22));
  l = person_likelihoods(obs("a", {FV::kAbsent}), fm);
  CHECK(l.a == doctest::Approx(0.35));
  CHECK(l.b == doctest::Approx(0.78));
  l = person_likelihoods(obs("a", {FV::kMissing}, true), fm);
  CHECK(l.a == 1.0);
  CHECK(l.b == 0.0);
  CHECK_THROWS_AS(person_likelihoods(obs("a", {}), fm), ContractViolation);
}

TEST_CASE("no data returns the prior") {
  const SpreadPrior prior{.pi_t = 0.3, .alpha = 2.0, .beta = 7.0};
  const auto r = posterior(prior, FeatureModel::smell_loss(), {});
  CHECK(std::abs(r.p_t1 - 0.3) <= 1e-9);
  CHECK(std::abs(r.q_mean_given_t1 - 2.0 / 9.0) <= 1e-9);
  CHECK(std::abs(r.prior_mass - 1.0) <= 1e-12);
  CHECK(std::abs(r.total_mass() - 1.0) <= 1e-8);
}

TEST_CASE("confirmed case forces an outbreak") {
  const auto fm = FeatureModel::smell_loss();
  const std::vector<Observation> o = {obs("c", {FV::kAbsent}, true), obs("x", {FV::kAbsent})};
  const auto r = posterior({}, fm, o);
  CHECK(r.p_t1 == 1.0);
  CHECK(r.p_t0 == 0.0);
  CHECK(individual_posterior(0, o, r) == 1.0);
  CHECK_THROWS_AS(
      posterior({.pi_t = 0.0}, fm, {obs("c", {FV::kMissing}, true)}), InconsistentEvidence);
}

TEST_CASE("two smell-loss reports match the pinned reference") {
  const auto fm = FeatureModel::smell_loss();
  const std::vector<Observation> two = {obs("a", {FV::kPresent}), obs("b", {FV::kPresent})};
  const auto r = posterior({}, fm, two, 1024);
  CHECK(rel_close(r.p_t1, kTwoSmellP, 1e-12));
  CHECK(rel_close(r.q_mean, kTwoSmellQ, 1e-12));
  CHECK(rel_close(r.z_post[0], kTwoSmellZ, 1e-12));
  CHECK(rel_close(individual_posterior("b", two, r), kTwoSmellZ, 1e-12));

  auto three = two;
  three.push_back(obs("c", {FV::kMissing}));
  const auto r3 = posterior({}, fm, three, 1024);
  CHECK(rel_close(r3.p_t1, kTwoSmellP, 1e-12));
  CHECK(rel_close(r3.z_post[2], kTwoSmellQ, 1e-12));
  CHECK_THROWS_AS(individual_posterior(3, three, r3), NotFound);
  CHECK_THROWS_AS(individual_posterior("nobody", three, r3), NotFound);
}

TEST_CASE("featureless person alone") {
  const auto r = posterior({}, FeatureModel::smell_loss(), {obs("a", {FV::kMissing})});
  CHECK(rel_close(r.p_t1, 0.5, 1e-12));
  CHECK(rel_close(r.q_mean, 0.05, 1e-12));
  CHECK(rel_close(r.z_post[0], 0.05, 1e-12));
}

TEST_CASE("uninformative features change nothing") {
  FeatureModel fm = FeatureModel::smell_loss();
  fm.features.push_back({"cough", 0.4, 0.4});
  const std::vector<Observation> base = {obs("a", {FV::kPresent, FV::kMissing}),
                                         obs("b", {FV::kAbsent, FV::kMissing})};
  const std::vector<Observation> with = {obs("a", {FV::kPresent, FV::kPresent}),
                                         obs("b", {FV::kAbsent, FV::kAbsent})};
  const auto r0 = posterior({}, fm, base);
  const auto r1 = posterior({}, fm, with);
  CHECK(std::abs(r0.p_t1 - r1.p_t1) <= 1e-12);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(r0.z_post[i] - r1.z_post[i]) <= 1e-12);
  for (std::size_t i = 0; i < r0.q_density.size(); ++i) {
    CHECK(rel_close(r0.q_density[i], r1.q_density[i], 1e-12));
  }
}

TEST_CASE("perfect features reduce to Beta conjugacy") {
  const FeatureModel fm{{{"perfect", 1.0, 0.0}}};
  const SpreadPrior prior{.pi_t = 1.0, .alpha = 1.5, .beta = 4.0};
  std::vector<Observation> o;
  int k = 0;
  for (int i = 0; i < 9; ++i) {
    const bool pos = i % 3 == 0;
    k += pos;
    o.push_back(obs(std::to_string(i), {pos ? FV::kPresent : FV::kAbsent}));
  }
  const auto r = posterior(prior, fm, o);
  const double a = prior.alpha + k, b = prior.beta + 9 - k;
  CHECK(std::abs(r.q_mean - a / (a + b)) <= 1e-8);
  CHECK(r.p_t1 == 1.0);
}

TEST_CASE("no outbreak prior") {
  const auto fm = FeatureModel::smell_loss();
  const auto r = posterior({.pi_t = 0.0}, fm, {obs("a", {FV::kPresent}), obs("b", {FV::kAbsent})});
  CHECK(r.p_t1 == 0.0);
  CHECK(r.q_mean == 0.0);
  CHECK(r.z_post[0] == 0.0);
  CHECK(r.z_post[1] == 0.0);
}

TEST_CASE("contract checks") {
  const auto fm = FeatureModel::smell_loss();
  CHECK_THROWS_AS(posterior({.alpha = 0.0}, fm, {}), ContractViolation);
  CHECK_THROWS_AS(posterior({.pi_t = 1.5}, fm, {}), ContractViolation);
  CHECK_THROWS_AS(posterior({}, fm, {}, 63), ContractViolation);
  CHECK_THROWS_AS(posterior({}, FeatureModel{{{"x", 1.2, 0.1}}}, {}), ContractViolation);
}

TEST_CASE("grid convergence and large N") {
  const auto fm = FeatureModel::smell_loss();
  std::mt19937_64 gen(11);
  std::vector<Observation> o;
  for (int i = 0; i < 3000; ++i) {
    o.push_back(obs(std::to_string(i), {gen() % 4 == 0 ? FV::kPresent : FV::kAbsent}));
  }
  for (std::size_t g : {1024u, 2048u}) {
    const auto a = posterior({}, fm, o, g);
    const auto b = posterior({}, fm, o, 2 * g);
    CHECK(std::abs(a.p_t1 - b.p_t1) <= 1e-6);
    CHECK(std::abs(a.total_mass() - 1.0) <= 1e-8);
    CHECK(std::isfinite(a.log_z));
  }
}

TEST_CASE("oracle variants agree with each other and with posterior") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const SpreadPrior prior{.pi_t = 0.05 + 0.9 * u(gen), .alpha = 0.7 + 4 * u(gen),
                            .beta = 0.7 + 9 * u(gen)};
    FeatureModel fm;
    const int v = 1 + static_cast<int>(gen() % 3);
    for (int i = 0; i < v; ++i) fm.features.push_back({"f" + std::to_string(i), u(gen), u(gen)});
    std::vector<Observation> o;
    const int n = static_cast<int>(gen() % 4);
    for (int i = 0; i < n; ++i) {
      std::vector<FV> f;
      for (int j = 0; j < v; ++j) f.push_back(static_cast<FV>(gen() % 3));
      o.push_back(obs(std::to_string(i), f, gen() % 10 == 0));
    }
    const auto e = oracle::enumerate(prior, fm, o);
    const auto g = oracle::fine_grid(prior, fm, o, 200000);
    const auto p = posterior(prior, fm, o);
    CHECK(rel_close(e.p_t1, g.p_t1, 1e-6));
    CHECK(rel_close(e.q_mean, g.q_mean, 1e-6));
    CHECK(rel_close(e.p_t1, p.p_t1, 1e-6));
    CHECK(rel_close(e.q_mean, p.q_mean, 1e-6));
    for (int i = 0; i < n; ++i) {
      CHECK(rel_close(e.z_post[i], g.z_post[i], 1e-6));
      CHECK(rel_close(e.z_post[i], p.z_post[i], 1e-6));
    }
  }
  CHECK_THROWS_AS(oracle::enumerate({}, FeatureModel::smell_loss(),
                                    std::vector<Observation>(13, obs("x", {FV::kMissing}))),
                  SizeError);
}

TEST_CASE("json round trip") {
  const auto fm = FeatureModel::smell_loss();
  const auto o = parse_observations(
      "{\"id\":\"a\",\"features\":{\"smell_loss\":1}}\n\n{\"id\":\"b\",\"confirmed\":true}\n", fm);
  REQUIRE(o.size() == 2);
  CHECK(o[0].features[0] == FV::kPresent);
  CHECK(o[1].features[0] == FV::kMissing);
  CHECK(o[1].confirmed);
  CHECK(observation_from_json(observation_to_json(o[0], fm), fm).features == o[0].features);
  CHECK_THROWS_AS(parse_observations("{\"id\":\"a\",\"features\":{\"fever\":1}}", fm),
                  ContractViolation);
  CHECK_THROWS_AS(parse_observations("{nope", fm), ParseError);
  const auto cfg = nlohmann::json::parse(R"({"prior":{"pi_t":0.2},"grid":2048})").get<SpreadConfig>();
  CHECK(cfg.prior.pi_t == 0.2);
  CHECK(cfg.prior.alpha == 1.0);
  CHECK(cfg.grid == 2048);
  CHECK(cfg.model.features.size() == 1);
}

}  // namespace
}  // namespace symcheck::spread

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

#ifndef SYMCHECK_SPREAD_SPREAD_H_
#define SYMCHECK_SPREAD_SPREAD_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace symcheck::spread {

// p(T=1) and the Beta(alpha, beta) density of q given T=1. Given T=0, q is
// exactly 0.
struct SpreadPrior {
  double pi_t = 0.5;
  double alpha = 1.0;
  double beta = 9.0;

  void validate() const;
};

struct Feature {
  std::string name;
  double sensitivity = 0.5;  // p(f=1 | z=1)
  double false_alarm = 0.5;  // p(f=1 | z=0)
};

struct FeatureModel {
  std::vector<Feature> features;

  std::size_t size() const { return features.size(); }
  // Throws NotFound.
  std::size_t index_of(std::string_view name) const;
  void validate() const;

  // Loss of taste or smell: 65% of positives, 22% of negatives.
  static FeatureModel smell_loss();
};

enum class FeatureValue : std::uint8_t { kAbsent = 0, kPresent = 1, kMissing = 2 };

struct Observation {
  std::string subject_id;
  // One value per feature of the model, in model order.
  std::vector<FeatureValue> features;
  bool confirmed = false;
};

struct PersonLikelihood {
  double a = 1.0;  // p(F_n | z_n = 1)
  double b = 1.0;  // p(F_n | z_n = 0); 0 for confirmed cases
};

PersonLikelihood person_likelihoods(const Observation& obs, const FeatureModel& fm);

struct PosteriorResult {
  double p_t1 = 0.0;
  // Uniform grid of cell midpoints in (0, 1) and the joint posterior density
  // p(q, T=1 | F) there, for plotting.
  std::vector<double> q_grid;
  std::vector<double> q_density;
  // E[q | F], the T=0 branch contributing q = 0.
  double q_mean = 0.0;
  // E[q | F, T=1].
  double q_mean_given_t1 = 0.0;
  std::array<double, 2> q_ci{0.0, 0.0};
  std::vector<double> z_post;
  double log_z = 0.0;
  // M0 / Z.
  double p_t0 = 0.0;
  // Integration nodes in q with weights, such that
  // sum(node_weights[i] * node_density[i]) = p_t1.
  std::vector<double> nodes;
  std::vector<double> node_weights;
  std::vector<double> node_density;
  // The same rule applied to the prior Beta density; 1 up to quadrature error.
  double prior_mass = 0.0;

  // p_t0 + sum of node_weights * node_density.
  double total_mass() const;
};

constexpr std::size_t kDefaultGrid = 1024;
constexpr std::size_t kMinGrid = 64;

// Throws ContractViolation on invalid input and InconsistentEvidence when no
// branch can explain the evidence (Z = 0).
PosteriorResult posterior(const SpreadPrior& prior, const FeatureModel& fm,
                          const std::vector<Observation>& observations,
                          std::size_t grid = kDefaultGrid);

// p(z_n = 1 | F) from a result computed on the same observations. Throws
// NotFound for an index or id outside the observations.
double individual_posterior(std::size_t n, const std::vector<Observation>& observations,
                            const PosteriorResult& result);
double individual_posterior(std::string_view subject_id,
                            const std::vector<Observation>& observations,
                            const PosteriorResult& result);

}  // namespace symcheck::spread

#endif  // SYMCHECK_SPREAD_SPREAD_H_

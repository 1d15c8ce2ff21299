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

#include "symcheck/spread/spread.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include "symcheck/common/errors.h"

namespace symcheck::spread {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

bool unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

// Distinct (log a, log b) pairs with multiplicities.
struct LikelihoodGroup {
  double log_a = 0.0;
  double log_b = 0.0;
  double count = 0.0;
};

double log_l(double log_q, double log_1mq, double log_a, double log_b) {
  return log_add(log_q + log_a, log_1mq + log_b);
}

// One node of q = logistic(pi * sinh t).
struct Node {
  double q = 0.0;
  double log_q = 0.0;
  double log_1mq = 0.0;
  double log_jac = 0.0;  // log dq/dt without the q(1-q) factor
};

Node node_at(double t) {
  const double x = std::numbers::pi * std::sinh(t);
  Node n;
  n.log_q = -softplus(-x);
  n.log_1mq = -softplus(x);
  n.q = std::exp(n.log_q);
  n.log_jac = std::log(std::numbers::pi * std::cosh(t));
  return n;
}

}  // namespace

void SpreadPrior::validate() const {
  if (!unit_interval(pi_t)) throw ContractViolation("pi_t must lie in [0, 1]");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ContractViolation("alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ContractViolation("beta must be > 0");
}

std::size_t FeatureModel::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].name == name) return i;
  }
  throw NotFound("unknown feature " + std::string(name));
}

void FeatureModel::validate() const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    if (!unit_interval(f.sensitivity) || !unit_interval(f.false_alarm)) {
      throw ContractViolation("feature " + f.name + ": rates must lie in [0, 1]");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (features[j].name == f.name) throw ContractViolation("duplicate feature " + f.name);
    }
  }
}

FeatureModel FeatureModel::smell_loss() {
  return FeatureModel{{Feature{.name = "smell_loss", .sensitivity = 0.65, .false_alarm = 0.22}}};
}

PersonLikelihood person_likelihoods(const Observation& obs, const FeatureModel& fm) {
  if (obs.features.size() != fm.size()) {
    throw ContractViolation("observation " + obs.subject_id + " has " +
                            std::to_string(obs.features.size()) + " features, model has " +
                            std::to_string(fm.size()));
  }
  PersonLikelihood l;
  for (std::size_t v = 0; v < fm.size(); ++v) {
    const auto& f = fm.features[v];
    switch (obs.features[v]) {
      case FeatureValue::kPresent:
        l.a *= f.sensitivity;
        l.b *= f.false_alarm;
        break;
      case FeatureValue::kAbsent:
        l.a *= 1.0 - f.sensitivity;
        l.b *= 1.0 - f.false_alarm;
        break;
      case FeatureValue::kMissing:
        break;
    }
  }
  if (obs.confirmed) l.b = 0.0;
  return l;
}

double PosteriorResult::total_mass() const {
  double m = p_t0;
  for (std::size_t i = 0; i < nodes.size(); ++i) m += node_weights[i] * node_density[i];
  return m;
}

PosteriorResult posterior(const SpreadPrior& prior, const FeatureModel& fm,
                          const std::vector<Observation>& observations, std::size_t grid) {
  prior.validate();
  fm.validate();
  if (grid < kMinGrid) throw ContractViolation("grid must be >= " + std::to_string(kMinGrid));

  std::vector<PersonLikelihood> people;
  people.reserve(observations.size());
  std::map<std::pair<double, double>, double> grouped;
  for (const auto& obs : observations) {
    people.push_back(person_likelihoods(obs, fm));
    grouped[{people.back().a, people.back().b}] += 1.0;
  }
  std::vector<LikelihoodGroup> groups;
  double log_prod_b = 0.0;
  for (const auto& [ab, count] : grouped) {
    groups.push_back({safe_log(ab.first), safe_log(ab.second), count});
    log_prod_b += count * safe_log(ab.second);
  }

  const double lb = log_beta(prior.alpha, prior.beta);
  auto log_likelihood = [&](double log_q, double log_1mq) {
    double s = 0.0;
    for (const auto& g : groups) s += g.count * log_l(log_q, log_1mq, g.log_a, g.log_b);
    return s;
  };

  // Trapezoid rule on a uniform grid in t; the integrand decays double
  // exponentially, so the range only has to push q^alpha and (1-q)^beta
  // below double precision.
  const double t_max =
      std::max(4.0, std::asinh(80.0 / (std::numbers::pi * std::min(prior.alpha, prior.beta))) + 0.25);
  const double h = 2.0 * t_max / static_cast<double>(grid - 1);

  std::vector<Node> nodes(grid);
  std::vector<double> log_w(grid);
  std::vector<double> lc(grid);  // log integrand of the T=1 branch, without pi_t
  double prior_mass = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = -t_max + h * static_cast<double>(i);
    nodes[i] = node_at(t);
    const auto& n = nodes[i];
    log_w[i] = std::log(i == 0 || i + 1 == grid ? 0.5 * h : h);
    const double log_prior = prior.alpha * n.log_q + prior.beta * n.log_1mq - lb + n.log_jac;
    prior_mass += std::exp(log_w[i] + log_prior);
    lc[i] = log_prior + log_likelihood(n.log_q, n.log_1mq);
  }

  const double lmax = *std::max_element(lc.begin(), lc.end());
  double log_i1 = kNegInf;
  double cond_sum = 0.0;
  double cond_q = 0.0;
  if (lmax != kNegInf) {
    for (std::size_t i = 0; i < grid; ++i) {
      const double e = std::exp(log_w[i] + lc[i] - lmax);
      cond_sum += e;
      cond_q += e * nodes[i].q;
    }
    log_i1 = safe_log(prior.pi_t) + lmax + std::log(cond_sum);
  }
  const double log_m0 = safe_log(1.0 - prior.pi_t) + log_prod_b;
  const double log_z = log_add(log_m0, log_i1);
  if (log_z == kNegInf || std::isnan(log_z)) {
    throw InconsistentEvidence("no outbreak branch can explain the observations (Z = 0)");
  }

  PosteriorResult r;
  r.log_z = log_z;
  r.prior_mass = prior_mass;
  r.p_t0 = std::exp(log_m0 - log_z);
  r.p_t1 = log_i1 == kNegInf ? 0.0 : std::exp(log_i1 - log_z);
  r.q_mean_given_t1 = cond_sum > 0.0 ? cond_q / cond_sum : prior.alpha / (prior.alpha + prior.beta);

  // Posterior mass carried by each node.
  const double log_pi = safe_log(prior.pi_t);
  std::vector<double> mass(grid, 0.0);
  for (std::size_t i = 0; i < grid; ++i) {
    mass[i] = std::exp(log_w[i] + log_pi + lc[i] - log_z);
    r.q_mean += mass[i] * nodes[i].q;
    if (mass[i] > 0.0) {
      const double log_dq = std::log(h) + nodes[i].log_jac + nodes[i].log_q + nodes[i].log_1mq;
      const double weight = std::exp(log_dq);
      if (weight > 0.0) {
        r.nodes.push_back(nodes[i].q);
        r.node_weights.push_back(weight);
        r.node_density.push_back(mass[i] / weight);
      }
    }
  }

  r.z_post.resize(people.size(), 0.0);
  for (std::size_t k = 0; k < people.size(); ++k) {
    if (observations[k].confirmed) {
      r.z_post[k] = 1.0;
      continue;
    }
    const double la = safe_log(people[k].a);
    const double lbk = safe_log(people[k].b);
    if (la == kNegInf) continue;
    double z = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
      if (mass[i] == 0.0) continue;
      const auto& n = nodes[i];
      const double ll = log_l(n.log_q, n.log_1mq, la, lbk);
      if (ll == kNegInf) continue;
      z += mass[i] * std::exp(n.log_q + la - ll);
    }
    r.z_post[k] = std::clamp(z, 0.0, 1.0);
  }

  // Central 95% interval of the mixture, point mass at 0 included.
  auto quantile = [&](double p) {
    if (p <= r.p_t0) return 0.0;
    double cdf = r.p_t0;
    double prev_q = 0.0;
    double prev_cdf = r.p_t0;
    for (std::size_t i = 0; i < grid; ++i) {
      const double mid = cdf + 0.5 * mass[i];
      if (mid >= p && mass[i] > 0.0) {
        const double span = mid - prev_cdf;
        const double frac = span > 0.0 ? (p - prev_cdf) / span : 1.0;
        return prev_q + frac * (nodes[i].q - prev_q);
      }
      cdf += mass[i];
      if (mass[i] > 0.0) {
        prev_q = nodes[i].q;
        prev_cdf = mid;
      }
    }
    return prev_q;
  };
  r.q_ci = {quantile(0.025), quantile(0.975)};

  // Plotting grid.
  r.q_grid.resize(grid);
  r.q_density.resize(grid);
  const double base = log_pi - lb - log_z;
  for (std::size_t i = 0; i < grid; ++i) {
    const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    const double log_q = std::log(q);
    const double log_1mq = std::log1p(-q);
    r.q_grid[i] = q;
    r.q_density[i] = std::exp(base + (prior.alpha - 1.0) * log_q + (prior.beta - 1.0) * log_1mq +
                              log_likelihood(log_q, log_1mq));
  }
  return r;
}

double individual_posterior(std::size_t n, const std::vector<Observation>& observations,
                            const PosteriorResult& result) {
  if (n >= observations.size() || n >= result.z_post.size()) {
    throw NotFound("no observation #" + std::to_string(n));
  }
  return result.z_post[n];
}

double individual_posterior(std::string_view subject_id,
                            const std::vector<Observation>& observations,
                            const PosteriorResult& result) {
  for (std::size_t n = 0; n < observations.size(); ++n) {
    if (observations[n].subject_id == subject_id) return individual_posterior(n, observations, result);
  }
  throw NotFound("no observation for subject " + std::string(subject_id));
}

}  // namespace symcheck::spread

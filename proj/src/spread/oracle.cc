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

#include "symcheck/spread/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "symcheck/common/errors.h"

namespace symcheck::spread::oracle {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double lg(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

double lse(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  return x > y ? x + std::log1p(std::exp(y - x)) : y + std::log1p(std::exp(x - y));
}

void check_inputs(const SpreadPrior& prior, const FeatureModel& fm) {
  prior.validate();
  fm.validate();
}

}  // namespace

PosteriorResult enumerate(const SpreadPrior& prior, const FeatureModel& fm,
                          const std::vector<Observation>& observations) {
  check_inputs(prior, fm);
  const std::size_t n = observations.size();
  if (n > kMaxEnumerated) {
    throw SizeError("enumeration supports at most " + std::to_string(kMaxEnumerated) +
                    " observations, got " + std::to_string(n));
  }
  std::vector<double> la(n), lb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = person_likelihoods(observations[i], fm);
    la[i] = lg(l.a);
    lb[i] = lg(l.b);
  }
  const double lpi = lg(prior.pi_t);
  const double lb0 = lbeta(prior.alpha, prior.beta);

  // log p(F, T=1), log of E[q; T=1] and log p(F, z_i=1, T=1).
  double l_t1 = kNegInf;
  double l_q = kNegInf;
  std::vector<double> l_z(n, kNegInf);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double lf = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        lf += la[i];
        ++k;
      } else {
        lf += lb[i];
      }
    }
    if (lf == kNegInf) continue;
    const double a = prior.alpha + k;
    const double b = prior.beta + static_cast<double>(n) - k;
    const double term = lpi + lf + lbeta(a, b) - lb0;
    l_t1 = lse(l_t1, term);
    l_q = lse(l_q, lpi + lf + lbeta(a + 1.0, b) - lb0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) l_z[i] = lse(l_z[i], term);
    }
  }
  double l_t0 = lg(1.0 - prior.pi_t);
  for (double v : lb) l_t0 += v;

  const double lz = lse(l_t0, l_t1);
  if (lz == kNegInf) throw InconsistentEvidence("Z = 0");
  PosteriorResult r;
  r.log_z = lz;
  r.p_t0 = std::exp(l_t0 - lz);
  r.p_t1 = std::exp(l_t1 - lz);
  r.q_mean = std::exp(l_q - lz);
  r.q_mean_given_t1 = l_t1 == kNegInf ? prior.alpha / (prior.alpha + prior.beta)
                                      : std::exp(l_q - l_t1);
  r.z_post.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.z_post[i] = std::exp(l_z[i] - lz);
  return r;
}

PosteriorResult fine_grid(const SpreadPrior& prior, const FeatureModel& fm,
                          const std::vector<Observation>& observations, std::size_t g_fine) {
  check_inputs(prior, fm);
  if (g_fine < kMinFineGrid) throw ContractViolation("fine grid needs at least 1e5 cells");
  const std::size_t n = observations.size();
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = person_likelihoods(observations[i], fm);
    a[i] = l.a;
    b[i] = l.b;
  }
  // Near an endpoint dq/du ~ u^(m-1), so q^(alpha-1) dq ~ u^(m*alpha - 1) du.
  const double m = std::max(1.0, 3.0 / std::min(prior.alpha, prior.beta));
  const double lb0 = lbeta(prior.alpha, prior.beta);
  const double du = 1.0 / static_cast<double>(g_fine);

  // Integrals scaled by exp(-shift) to keep sums in range.
  std::vector<double> lw(g_fine), qs(g_fine);
  double shift = kNegInf;
  for (std::size_t j = 0; j < g_fine; ++j) {
    const double u = (static_cast<double>(j) + 0.5) * du;
    const double lu = m * std::log(u);
    const double lv = m * std::log1p(-u);
    const double lden = lse(lu, lv);
    const double log_q = lu - lden;
    const double log_1mq = lv - lden;
    const double q = std::exp(log_q);
    // dq/du = m u^(m-1) (1-u)^(m-1) / (u^m + (1-u)^m)^2
    const double log_dq = std::log(m) + (m - 1.0) * (std::log(u) + std::log1p(-u)) - 2.0 * lden;
    double l = (prior.alpha - 1.0) * log_q + (prior.beta - 1.0) * log_1mq - lb0 + log_dq +
               std::log(du);
    for (std::size_t i = 0; i < n; ++i) l += lg(q * a[i] + std::exp(log_1mq) * b[i]);
    lw[j] = l;
    qs[j] = q;
    shift = std::max(shift, l);
  }

  double s1 = 0.0, sq = 0.0;
  std::vector<double> sz(n, 0.0);
  if (shift != kNegInf) {
    for (std::size_t j = 0; j < g_fine; ++j) {
      const double w = std::exp(lw[j] - shift);
      if (w == 0.0) continue;
      s1 += w;
      sq += w * qs[j];
      const double omq = 1.0 - qs[j];
      for (std::size_t i = 0; i < n; ++i) {
        const double li = qs[j] * a[i] + omq * b[i];
        if (li > 0.0) sz[i] += w * qs[j] * a[i] / li;
      }
    }
  }
  const double l_t1 = s1 > 0.0 ? lg(prior.pi_t) + shift + std::log(s1) : kNegInf;
  double l_t0 = lg(1.0 - prior.pi_t);
  for (double v : b) l_t0 += lg(v);
  const double lz = lse(l_t0, l_t1);
  if (lz == kNegInf) throw InconsistentEvidence("Z = 0");

  PosteriorResult r;
  r.log_z = lz;
  r.p_t0 = std::exp(l_t0 - lz);
  r.p_t1 = std::exp(l_t1 - lz);
  r.q_mean_given_t1 = s1 > 0.0 ? sq / s1 : prior.alpha / (prior.alpha + prior.beta);
  r.q_mean = r.p_t1 * r.q_mean_given_t1;
  r.z_post.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.z_post[i] = observations[i].confirmed ? 1.0 : (s1 > 0.0 ? r.p_t1 * sz[i] / s1 : 0.0);
  }
  return r;
}

}  // namespace symcheck::spread::oracle

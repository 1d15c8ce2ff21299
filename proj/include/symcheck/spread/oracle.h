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

#ifndef SYMCHECK_SPREAD_ORACLE_H_
#define SYMCHECK_SPREAD_ORACLE_H_

#include <cstddef>
#include <vector>

#include "symcheck/spread/spread.h"

namespace symcheck::spread::oracle {

constexpr std::size_t kMaxEnumerated = 12;
constexpr std::size_t kMinFineGrid = 100000;

// Sums over all 2^N infection assignments; each assignment integrates q in
// closed form through Beta function ratios. Fills p_t1, p_t0, q_mean,
// q_mean_given_t1, z_post and log_z. Throws SizeError when N > 12.
PosteriorResult enumerate(const SpreadPrior& prior, const FeatureModel& fm,
                          const std::vector<Observation>& observations);

// Midpoint rule with g_fine cells over u in (0,1), q = u^m / (u^m + (1-u)^m),
// with m large enough to flatten the Beta endpoint singularities. Fills the
// same fields as enumerate(). Throws ContractViolation when g_fine < 1e5.
PosteriorResult fine_grid(const SpreadPrior& prior, const FeatureModel& fm,
                          const std::vector<Observation>& observations,
                          std::size_t g_fine = kMinFineGrid);

}  // namespace symcheck::spread::oracle

#endif  // SYMCHECK_SPREAD_ORACLE_H_

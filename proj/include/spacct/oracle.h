// Copyright 2026 The spacct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPACCT_ORACLE_H_
#define SPACCT_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "spacct/compose.h"
#include "spacct/curve.h"
#include "spacct/scenario.h"

namespace spacct {

// Ground truth for tiny instances. Everything here is computed by brute
// force over templates and database realizations, independently of the
// accounting formulas in compose.h.

inline constexpr std::uint64_t kDefaultOracleCap = 10'000'000;

// Joint law of the full answer tuple (a_1, ..., a_m), flattened in mixed
// radix with radices n_k + 1 (a_1 least significant), for each value of the
// critical entry.
struct ExactMechanismLaw {
  std::vector<int> radices;
  ConditionalLaws conditional;
};

// Enumerates every template of the format (uniformly weighted), every
// realization of the non-critical entries and every critical value. Throws
// CapacityError when |W|^(n-1) * templates * answer tuples exceeds `cap`.
ExactMechanismLaw BuildExactMechanismLaw(const Scenario& scenario,
                                         const CompositionSpec& spec,
                                         std::uint64_t cap = kDefaultOracleCap);

// max over ordered critical pairs of the hockey-stick divergence between the
// exact joint answer laws.
double ExactMechanismDelta(const Scenario& scenario,
                           const CompositionSpec& spec, double epsilon,
                           std::uint64_t cap = kDefaultOracleCap);

struct McEstimate {
  double estimate = 0.0;
  double half_width = 0.0;
};

// Estimate of the mechanism's D-hat from empirical answer-tuple histograms,
// `trials` draws per critical value. The draws are split into two folds by
// trial parity; the pair (v, w) and the set S where P exceeds e^eps Q are
// picked from one fold and P(S) - e^eps Q(S) is measured on the other, then
// the two directions are averaged. The half-width is the 95% normal
// interval of that average. One result per epsilon; samples are shared
// across epsilons.
std::vector<McEstimate> McDistinguish(const Scenario& scenario,
                                      const CompositionSpec& spec,
                                      std::span<const double> epsilons,
                                      std::uint64_t trials,
                                      std::uint64_t seed);

McEstimate McDistinguish(const Scenario& scenario, const CompositionSpec& spec,
                         double epsilon, std::uint64_t trials,
                         std::uint64_t seed);

// Estimate for one ordered pair of critical values. `v == w` is allowed: the
// two sides then use independent sample streams, which exposes the
// estimator's bias at zero divergence.
McEstimate McDistinguishPair(const Scenario& scenario,
                             const CompositionSpec& spec, int v, int w,
                             double epsilon, std::uint64_t trials,
                             std::uint64_t seed);

}  // namespace spacct

#endif  // SPACCT_ORACLE_H_

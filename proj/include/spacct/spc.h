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

#ifndef SPACCT_SPC_H_
#define SPACCT_SPC_H_

#include <cstdint>
#include <optional>
#include <variant>

#include "spacct/partition.h"
#include "spacct/pmf.h"
#include "spacct/query.h"
#include "spacct/scenario.h"

namespace spacct {

// Sampling privacy curves: the expected D-hat of a query answered on a
// random sample, given that the critical entry is in the sample.

// Property query on `attribute` over iid entries; reduces to D-hat of the
// two conditional laws at database size `sample_size`.
double SpcIid(const Scenario& scenario, int sample_size, double epsilon,
              int attribute = 0);

// Population used for the law of the number of known entries among the
// s - 1 non-critical sample slots.
enum class KnownPopulation {
  kAllEntries,   // Hypergeometric(n, v, s - 1), the formula as published
  kNonCritical,  // Hypergeometric(n - 1, v, s - 1), exact for a sample that
                 // contains the critical entry
};

// Mixture weights over z, the number of known entries in the sample.
Pmf KnownEntriesWeights(const Scenario& scenario, int sample_size,
                        KnownPopulation population = KnownPopulation::kAllEntries);

// D-hat of a property query on a sample of size `sample_size` of which
// `known_in_sample` non-critical entries are known: the laws are those of
// a database of size sample_size - known_in_sample.
double KnownEntriesTerm(double p, int sample_size, int known_in_sample,
                        double epsilon);

double SpcKnownEntries(const Scenario& scenario, int sample_size,
                       double epsilon,
                       KnownPopulation population = KnownPopulation::kAllEntries);

// (1 - cdf(phi)) + cdf(phi) * D-hat at phi known entries; requires
// 0 <= phi < sample_size - 1. Upper-bounds SpcKnownEntries.
double SpcKnownEntriesThresholdBound(
    const Scenario& scenario, int sample_size, double epsilon, int phi,
    KnownPopulation population = KnownPopulation::kAllEntries);

struct Enumerate {
  std::uint64_t cap = kDefaultTemplateCap;
};

struct MonteCarlo {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
};

using EvaluationMode = std::variant<Enumerate, MonteCarlo>;

struct Estimate {
  double value = 0.0;
  // 95% normal-approximation half-width; absent for exact evaluation.
  std::optional<double> half_width;
};

// Expectation over templates of `law` (which must be restricted to the
// scenario's critical index) of D-hat of the block holding the critical
// entry.
Estimate SpcGeneral(const Scenario& scenario, const PartitionLaw& law,
                    const QueryKernel& kernel, double epsilon,
                    const EvaluationMode& mode = Enumerate{});

}  // namespace spacct

#endif  // SPACCT_SPC_H_

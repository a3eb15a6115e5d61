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

#include "spacct/spc.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "spacct/curve.h"
#include "spacct/errors.h"
#include "spacct/numerics.h"

namespace spacct {
namespace {

void RequireKnownScenario(const Scenario& scenario, int sample_size) {
  if (scenario.model() == EntryModel::kExplicit) {
    throw DomainError("known-entry SPC needs an iid or known-entry scenario");
  }
  if (scenario.attributes() != 1) {
    throw DomainError("known-entry SPC is defined for a single attribute");
  }
  if (sample_size < 1 || sample_size > scenario.n()) {
    throw DomainError("sample size must lie in [1, n]");
  }
}

// Sample blocks are sets, so the D-hat of a block is cached by its sorted
// members.
double BlockDHat(const Scenario& scenario, const QueryKernel& kernel,
                 const std::vector<int>& block, double epsilon,
                 std::map<std::vector<int>, double>& cache) {
  std::vector<int> key = block;
  std::sort(key.begin(), key.end());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double d = DHat(kernel.CriticalLaws(scenario, key), epsilon);
  cache.emplace(std::move(key), d);
  return d;
}

}  // namespace

double SpcIid(const Scenario& scenario, int sample_size, double epsilon,
              int attribute) {
  if (sample_size < 1 || sample_size > scenario.n()) {
    throw DomainError("SpcIid: sample size must lie in [1, n]");
  }
  if (scenario.model() != EntryModel::kIid) {
    throw DomainError("SpcIid: scenario is not iid");
  }
  return DHat(PropertyQueryLaws(sample_size,
                                scenario.iid_probability(attribute)),
              epsilon);
}

Pmf KnownEntriesWeights(const Scenario& scenario, int sample_size,
                        KnownPopulation population) {
  RequireKnownScenario(scenario, sample_size);
  const int v = scenario.known();
  const int pop = population == KnownPopulation::kAllEntries
                      ? scenario.n()
                      : scenario.n() - 1;
  return Hypergeometric(pop, v, sample_size - 1);
}

double KnownEntriesTerm(double p, int sample_size, int known_in_sample,
                        double epsilon) {
  if (known_in_sample < 0 || known_in_sample > sample_size - 1) {
    throw DomainError("KnownEntriesTerm: known count must lie in [0, s-1]");
  }
  return DHat(PropertyQueryLaws(sample_size - known_in_sample, p), epsilon);
}

double SpcKnownEntries(const Scenario& scenario, int sample_size,
                       double epsilon, KnownPopulation population) {
  const Pmf weights = KnownEntriesWeights(scenario, sample_size, population);
  const double p = scenario.iid_probability();
  CompensatedSum acc;
  for (int z = weights.min_support(); z <= weights.max_support(); ++z) {
    const double w = weights.mass(z);
    if (w == 0.0) continue;
    acc.Add(w * KnownEntriesTerm(p, sample_size, z, epsilon));
  }
  return std::clamp(acc.Result(), 0.0, 1.0);
}

double SpcKnownEntriesThresholdBound(const Scenario& scenario,
                                     int sample_size, double epsilon, int phi,
                                     KnownPopulation population) {
  if (phi < 0 || phi >= sample_size - 1) {
    throw DomainError("threshold phi must satisfy 0 <= phi < s - 1");
  }
  const Pmf weights = KnownEntriesWeights(scenario, sample_size, population);
  const double below = std::min(1.0, Cdf(weights, phi));
  const double at_phi =
      KnownEntriesTerm(scenario.iid_probability(), sample_size, phi, epsilon);
  return std::min(1.0, (1.0 - below) + below * at_phi);
}

Estimate SpcGeneral(const Scenario& scenario, const PartitionLaw& law,
                    const QueryKernel& kernel, double epsilon,
                    const EvaluationMode& mode) {
  const auto& r = law.restriction();
  if (!r || r->critical_index != scenario.critical_index()) {
    throw DomainError(
        "SpcGeneral: law must be restricted to the scenario's critical index");
  }
  if (law.n() != scenario.n()) {
    throw DomainError("SpcGeneral: law and scenario disagree on n");
  }
  const auto block_index = static_cast<std::size_t>(r->block - 1);
  std::map<std::vector<int>, double> cache;

  if (const auto* e = std::get_if<Enumerate>(&mode)) {
    CompensatedSum acc;
    for (const auto& [tmpl, weight] : EnumerateTemplates(law, e->cap)) {
      acc.Add(weight *
              BlockDHat(scenario, kernel, tmpl.blocks[block_index], epsilon,
                        cache));
    }
    return {std::clamp(acc.Result(), 0.0, 1.0), std::nullopt};
  }

  const auto& mc = std::get<MonteCarlo>(mode);
  if (mc.trials < 2) throw DomainError("SpcGeneral: need at least 2 trials");
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (std::uint64_t t = 0; t < mc.trials; ++t) {
    SplitMix64 rng(DeriveSeed(mc.seed, t));
    const Template tmpl = SampleTemplate(law, rng);
    const double d =
        BlockDHat(scenario, kernel, tmpl.blocks[block_index], epsilon, cache);
    sum.Add(d);
    sum_sq.Add(d * d);
  }
  const double count = static_cast<double>(mc.trials);
  const double mean = sum.Result() / count;
  const double var =
      std::max(0.0, (sum_sq.Result() - count * mean * mean) / (count - 1.0));
  return {mean, 1.96 * std::sqrt(var / count)};
}

}  // namespace spacct

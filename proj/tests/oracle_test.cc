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


#include "spacct/oracle.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "exact.h"
#include "spacct/compose.h"
#include "spacct/errors.h"

namespace spacct {
namespace {

using ::spacct::testing::ReferenceHockeyStick;

CompositionSpec EqualBlocks(int n, int m, QueryDescriptor q = {}) {
  return {TemplateFormat{std::vector<int>(m, n / m)},
          std::vector<QueryDescriptor>(m, q)};
}

// Joint answer laws by walking all n! orderings of the indices (the first
// n_1 form block 1, and so on), which weights every template uniformly, and
// all realizations of the non-critical entries.
std::map<int, std::map<int, double>> BruteForceLaws(
    const Scenario& scenario, const CompositionSpec& spec) {
  const int n = scenario.n();
  const int values = scenario.value_count();
  const int j = scenario.critical_index() - 1;
  const std::vector<int>& sizes = spec.format.sizes;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> orderings;
  do orderings.push_back(order);
  while (std::next_permutation(order.begin(), order.end()));

  std::map<int, std::map<int, double>> laws;
  std::vector<int> db(n, 0);
  long total = 1;
  for (int i = 0; i < n - 1; ++i) total *= values;
  for (int v = 0; v < values; ++v) {
    for (long code = 0; code < total; ++code) {
      long rest = code;
      double weight = 1.0;
      for (int i = 0; i < n; ++i) {
        if (i == j) {
          db[i] = v;
          continue;
        }
        db[i] = static_cast<int>(rest % values);
        rest /= values;
        for (int a = 0; a < scenario.attributes(); ++a) {
          const double p = scenario.probability(i + 1, a);
          weight *= (db[i] >> a & 1) ? p : 1.0 - p;
        }
      }
      if (weight == 0.0) continue;
      for (const auto& perm : orderings) {
        std::vector<int> prefix;
        int key = 0;
        int pos = 0;
        for (std::size_t k = 0; k < sizes.size(); ++k) {
          const int attribute =
              spec.QueryFor(static_cast<int>(k) + 1, prefix).attribute;
          int answer = 0;
          for (int t = 0; t < sizes[k]; ++t) {
            answer += db[perm[pos++]] >> attribute & 1;
          }
          prefix.push_back(answer);
          key = key * 16 + answer;
        }
        laws[v][key] += weight / static_cast<double>(orderings.size());
      }
    }
  }
  return laws;
}

double BruteForceDelta(const Scenario& scenario, const CompositionSpec& spec,
                       double eps) {
  const auto laws = BruteForceLaws(scenario, spec);
  double best = 0.0;
  for (const auto& [v, p] : laws) {
    for (const auto& [w, q] : laws) {
      if (v != w) best = std::max(best, ReferenceHockeyStick(p, q, eps));
    }
  }
  return best;
}

TEST(ExactMechanismTest, TwoEntriesOneSample) {
  // The sampled entry is the critical one with probability 1/2. Given
  // critical value 1 the answer is 1 w.p. 3/4, given 0 w.p. 1/4.
  const Scenario s = Scenario::Iid(2, 0.5);
  const CompositionSpec spec{TemplateFormat{{1}}, std::vector<QueryDescriptor>{{}}};
  EXPECT_NEAR(ExactMechanismDelta(s, spec, 0.0), 0.5, 1e-15);
  for (double eps : {0.1, 0.5, 1.0}) {
    const double expected = std::max(0.0, 0.75 - std::exp(eps) * 0.25);
    EXPECT_NEAR(ExactMechanismDelta(s, spec, eps), expected, 1e-15);
    EXPECT_LE(ExactMechanismDelta(s, spec, eps),
              NonadaptiveIid(s, spec, eps).total_delta + 1e-12);
  }
}

TEST(ExactMechanismTest, MatchesPermutationBruteForce) {
  struct Case {
    Scenario scenario;
    CompositionSpec spec;
  };
  const std::vector<Case> cases = {
      {Scenario::Iid(4, 0.3), EqualBlocks(4, 2)},
      {Scenario::Explicit({0.2, 0.8, 0.5, 0.5}, 3), EqualBlocks(4, 2)},
      {Scenario::Explicit({0.1, 0.6, 0.3, 0.9, 0.5}, 2),
       {TemplateFormat{{2, 3}}, std::vector<QueryDescriptor>(2)}},
      {Scenario::Iid(5, 0.4), {TemplateFormat{{1, 2}}, std::vector<QueryDescriptor>(2)}},
      {Scenario::ExplicitAttributes({{0.2, 0.7}, {0.5, 0.5}, {0.9, 0.3},
                                     {0.4, 0.6}, {0.5, 0.1}, {0.3, 0.8}}),
       {TemplateFormat{{2, 2}},
        AdaptiveTree::ThresholdSwitch({0}, 1, {1}, {0})}},
  };
  for (const Case& c : cases) {
    for (double eps : {0.0, 0.1, 1.0}) {
      EXPECT_NEAR(ExactMechanismDelta(c.scenario, c.spec, eps),
                  BruteForceDelta(c.scenario, c.spec, eps), 1e-12)
          << "n=" << c.scenario.n() << " eps=" << eps;
    }
  }
}

TEST(ExactMechanismTest, LawsAreNormalized) {
  const ExactMechanismLaw law = BuildExactMechanismLaw(
      Scenario::Explicit({0.2, 0.8, 0.5, 0.5, 0.1, 0.7}, 4), EqualBlocks(6, 2));
  EXPECT_EQ(law.radices, (std::vector<int>{4, 4}));
  ASSERT_EQ(law.conditional.size(), 2u);
  for (const auto& [v, pmf] : law.conditional) {
    EXPECT_NEAR(pmf.Total(), 1.0, 1e-12);
  }
}

TEST(ExactMechanismTest, IdenticalConditionalsGiveZero) {
  // Only attribute 1 is queried, so critical values 0 and 1 (which differ
  // in attribute 0 alone) induce the same answer law.
  const Scenario s = Scenario::IidAttributes(4, {0.3, 0.6});
  const CompositionSpec spec = EqualBlocks(4, 2, {1});
  const ExactMechanismLaw law = BuildExactMechanismLaw(s, spec);
  for (double eps : {0.0, 0.1}) {
    EXPECT_EQ(HockeyStick(law.conditional.at(0), law.conditional.at(1), eps),
              0.0);
    EXPECT_EQ(HockeyStick(law.conditional.at(2), law.conditional.at(3), eps),
              0.0);
  }
  EXPECT_GT(ExactMechanismDelta(s, spec, 0.0), 0.0);
}

TEST(ExactMechanismTest, DominatedByNonadaptiveBound) {
  const Scenario s = Scenario::Iid(4, 0.5);
  const CompositionSpec spec = EqualBlocks(4, 2);
  for (double eps : DefaultEpsilonGrid()) {
    EXPECT_LE(ExactMechanismDelta(s, spec, eps),
              NonadaptiveIid(s, spec, eps).total_delta + 1e-9);
  }
}

TEST(ExactMechanismTest, CapIsEnforced) {
  const Scenario s = Scenario::IidAttributes(8, {0.5, 0.5});
  EXPECT_THROW(ExactMechanismDelta(s, EqualBlocks(8, 2), 0.1, 1000),
               CapacityError);
  EXPECT_NO_THROW(ExactMechanismDelta(Scenario::Iid(4, 0.5),
                                      EqualBlocks(4, 2), 0.1, 1000));
}

TEST(McDistinguishTest, ConsistentWithExact) {
  const std::vector<std::pair<Scenario, CompositionSpec>> cases = {
      {Scenario::Iid(2, 0.5), EqualBlocks(2, 1)},
      {Scenario::Iid(4, 0.2), EqualBlocks(4, 2)},
      {Scenario::Explicit({0.2, 0.8, 0.5, 0.5}, 3), EqualBlocks(4, 2)},
  };
  const std::vector<double> eps = {0.0, 0.1, 1.0};
  for (const auto& [s, spec] : cases) {
    const auto mc = McDistinguish(s, spec, eps, 100000, 11);
    ASSERT_EQ(mc.size(), eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double exact = ExactMechanismDelta(s, spec, eps[i]);
      EXPECT_GT(mc[i].half_width, 0.0);
      EXPECT_LE(std::abs(mc[i].estimate - exact), 3 * mc[i].half_width)
          << "n=" << s.n() << " eps=" << eps[i];
    }
  }
}

TEST(McDistinguishTest, SameValueNearZero) {
  const Scenario s = Scenario::Iid(4, 0.5);
  const McEstimate e =
      McDistinguishPair(s, EqualBlocks(4, 2), 1, 1, 0.0, 100000, 3);
  EXPECT_GE(e.estimate, 0.0);
  EXPECT_LE(e.estimate, e.half_width);
}

TEST(McDistinguishTest, DeterministicPerSeed) {
  const Scenario s = Scenario::Explicit({0.2, 0.8, 0.5, 0.5, 0.4, 0.6}, 2);
  const CompositionSpec spec = EqualBlocks(6, 2);
  const McEstimate a = McDistinguish(s, spec, 0.1, 5000, 42);
  const McEstimate b = McDistinguish(s, spec, 0.1, 5000, 42);
  const McEstimate c = McDistinguish(s, spec, 0.1, 5000, 43);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.half_width, b.half_width);
  EXPECT_NE(a.estimate, c.estimate);
  const std::vector<double> grid = {0.0, 0.1};
  EXPECT_EQ(McDistinguish(s, spec, grid, 5000, 42)[1].estimate, a.estimate);
}

TEST(McDistinguishTest, RejectsTooFewTrials) {
  EXPECT_THROW(McDistinguish(Scenario::Iid(4, 0.5), EqualBlocks(4, 2), 0.0,
                             999, 1),
               DomainError);
}

}  // namespace
}  // namespace spacct

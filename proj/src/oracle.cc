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
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "spacct/errors.h"
#include "spacct/partition.h"
#include "spacct/query.h"
#include "spacct/rng.h"

namespace spacct {
namespace {

constexpr std::uint64_t kMinTrials = 1000;

std::vector<int> Radices(const CompositionSpec& spec) {
  std::vector<int> radices;
  for (int s : spec.format.sizes) radices.push_back(s + 1);
  return radices;
}

std::size_t TupleCount(const std::vector<int>& radices) {
  std::size_t count = 1;
  for (int r : radices) count *= static_cast<std::size_t>(r);
  return count;
}

// Answers every block of `t` in order, feeding earlier answers to the
// adaptive tree, and returns the flattened tuple index.
std::size_t AnswerTuple(const CompositionSpec& spec, const Template& t,
                        std::span<const int> values,
                        std::vector<int>& prefix) {
  prefix.clear();
  std::size_t index = 0;
  std::size_t stride = 1;
  for (int k = 1; k <= spec.format.blocks(); ++k) {
    const PropertyQuery query(spec.QueryFor(k, prefix));
    const auto& block = t.blocks[static_cast<std::size_t>(k - 1)];
    const int answer = query.Evaluate(block, values);
    index += stride * static_cast<std::size_t>(answer);
    stride *= block.size() + 1;
    prefix.push_back(answer);
  }
  return index;
}

// Probability of each value of W for each entry: table[i][v], 1-based i.
std::vector<std::vector<double>> ValueProbabilities(const Scenario& s) {
  std::vector<std::vector<double>> table(static_cast<std::size_t>(s.n()) + 1);
  for (int i = 1; i <= s.n(); ++i) {
    auto& row = table[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(s.value_count()), 1.0);
    for (int v = 0; v < s.value_count(); ++v) {
      for (int a = 0; a < s.attributes(); ++a) {
        const double p = s.probability(i, a);
        row[static_cast<std::size_t>(v)] *= ((v >> a) & 1) ? p : 1.0 - p;
      }
    }
  }
  return table;
}

// Answer-tuple counts split into two folds by trial parity.
struct Folds {
  std::array<std::vector<std::uint64_t>, 2> counts;
  std::array<double, 2> trials{};
};

// Tuples where the empirical P exceeds e^eps times the empirical Q, and the
// plug-in divergence on that set.
std::pair<double, std::vector<bool>> PlugInSet(
    const std::vector<std::uint64_t>& counts_v,
    const std::vector<std::uint64_t>& counts_w, double trials, double scale) {
  std::vector<bool> set(counts_v.size(), false);
  double delta = 0.0;
  for (std::size_t a = 0; a < counts_v.size(); ++a) {
    const double pv = static_cast<double>(counts_v[a]) / trials;
    const double pw = static_cast<double>(counts_w[a]) / trials;
    if (pv > scale * pw) {
      set[a] = true;
      delta += pv - scale * pw;
    }
  }
  return {delta, std::move(set)};
}

// P(S) - e^eps Q(S) on held-out counts, with its sampling variance.
std::pair<double, double> ScoreSet(const std::vector<bool>& set,
                                   const std::vector<std::uint64_t>& counts_v,
                                   const std::vector<std::uint64_t>& counts_w,
                                   double trials, double scale) {
  double mass_v = 0.0;
  double mass_w = 0.0;
  for (std::size_t a = 0; a < set.size(); ++a) {
    if (!set[a]) continue;
    mass_v += static_cast<double>(counts_v[a]) / trials;
    mass_w += static_cast<double>(counts_w[a]) / trials;
  }
  const double var = (mass_v * (1.0 - mass_v) +
                      scale * scale * mass_w * (1.0 - mass_w)) /
                     trials;
  return {mass_v - scale * mass_w, std::max(0.0, var)};
}

// Cross-fitted estimate of max over `pairs` of the hockey-stick: the pair and
// set are chosen on one fold and scored on the other, in both directions.
// Scoring on held-out draws removes the upward bias of the plain plug-in.
McEstimate CrossFit(const std::vector<Folds>& folds,
                    const std::vector<std::pair<int, int>>& pairs,
                    double epsilon) {
  const double scale = std::exp(epsilon);
  double sum = 0.0;
  double var = 0.0;
  for (int f = 0; f < 2; ++f) {
    const int g = 1 - f;
    double best = -1.0;
    std::pair<int, int> best_pair = pairs.front();
    std::vector<bool> best_set;
    for (const auto& [v, w] : pairs) {
      auto [delta, set] =
          PlugInSet(folds[static_cast<std::size_t>(v)].counts[f],
                    folds[static_cast<std::size_t>(w)].counts[f],
                    folds[static_cast<std::size_t>(v)].trials[f], scale);
      if (delta > best) {
        best = delta;
        best_pair = {v, w};
        best_set = std::move(set);
      }
    }
    const Folds& fv = folds[static_cast<std::size_t>(best_pair.first)];
    const Folds& fw = folds[static_cast<std::size_t>(best_pair.second)];
    const auto [score, score_var] =
        ScoreSet(best_set, fv.counts[g], fw.counts[g], fv.trials[g], scale);
    sum += score;
    var += score_var;
  }
  return {std::clamp(sum / 2.0, 0.0, 1.0), 1.96 * std::sqrt(var) / 2.0};
}

Folds SampleHistogram(const Scenario& scenario, const CompositionSpec& spec,
                      int critical_value, std::uint64_t stream,
                      std::uint64_t trials, std::uint64_t seed) {
  const PartitionLaw law(scenario.n(), spec.format);
  const std::vector<int> radices = Radices(spec);
  Folds folds;
  for (auto& c : folds.counts) c.assign(TupleCount(radices), 0);
  folds.trials = {static_cast<double>((trials + 1) / 2),
                  static_cast<double>(trials / 2)};
  std::vector<int> values(static_cast<std::size_t>(scenario.n()) + 1, 0);
  std::vector<int> prefix;
  const int j = scenario.critical_index();
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng(DeriveSeed(seed, stream, t));
    const Template tmpl = SampleTemplate(law, rng);
    for (int i = 1; i <= scenario.n(); ++i) {
      int v = 0;
      if (i == j) {
        v = critical_value;
      } else {
        for (int a = 0; a < scenario.attributes(); ++a) {
          if (UniformUnit(rng) < scenario.probability(i, a)) v |= 1 << a;
        }
      }
      values[static_cast<std::size_t>(i)] = v;
    }
    ++folds.counts[t & 1][AnswerTuple(spec, tmpl, values, prefix)];
  }
  return folds;
}

void CheckTrials(std::uint64_t trials) {
  if (trials < kMinTrials) {
    throw DomainError("Monte-Carlo estimation needs at least " +
                      std::to_string(kMinTrials) + " trials");
  }
}

}  // namespace

ExactMechanismLaw BuildExactMechanismLaw(const Scenario& scenario,
                                         const CompositionSpec& spec,
                                         std::uint64_t cap) {
  spec.Validate(scenario);
  const PartitionLaw law(scenario.n(), spec.format);
  const std::vector<int> radices = Radices(spec);
  const std::size_t tuples = TupleCount(radices);
  const int n = scenario.n();
  const int values_per_entry = scenario.value_count();

  const long double work = std::pow(static_cast<long double>(values_per_entry),
                                    static_cast<long double>(n - 1)) *
                           static_cast<long double>(TemplateCount(law)) *
                           static_cast<long double>(tuples);
  if (work > static_cast<long double>(cap)) {
    char steps[32];
    std::snprintf(steps, sizeof(steps), "%.3Lg", work);
    throw CapacityError(
        std::string("exact mechanism enumeration needs about ") + steps +
            " steps; use Monte-Carlo mode or a smaller instance",
        cap);
  }

  const auto templates = EnumerateTemplates(law, cap);
  const auto value_p = ValueProbabilities(scenario);
  const int j = scenario.critical_index();

  ExactMechanismLaw out;
  out.radices = radices;
  std::vector<int> values(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> digits(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> prefix;
  for (int c = 0; c < values_per_entry; ++c) {
    std::vector<double> masses(tuples, 0.0);
    std::fill(digits.begin(), digits.end(), 0);
    // Odometer over the non-critical entries' values.
    while (true) {
      double weight = 1.0;
      for (int i = 1; i <= n; ++i) {
        const int v = i == j ? c : digits[static_cast<std::size_t>(i)];
        values[static_cast<std::size_t>(i)] = v;
        if (i != j) {
          weight *= value_p[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
        }
      }
      if (weight > 0.0) {
        for (const auto& [tmpl, tw] : templates) {
          masses[AnswerTuple(spec, tmpl, values, prefix)] += weight * tw;
        }
      }
      int i = 1;
      for (; i <= n; ++i) {
        if (i == j) continue;
        auto& d = digits[static_cast<std::size_t>(i)];
        if (++d < values_per_entry) break;
        d = 0;
      }
      if (i > n) break;
    }
    out.conditional.emplace(c, Pmf(0, std::move(masses)));
  }
  return out;
}

double ExactMechanismDelta(const Scenario& scenario,
                           const CompositionSpec& spec, double epsilon,
                           std::uint64_t cap) {
  const ExactMechanismLaw law = BuildExactMechanismLaw(scenario, spec, cap);
  return DHat(law.conditional, epsilon);
}

std::vector<McEstimate> McDistinguish(const Scenario& scenario,
                                      const CompositionSpec& spec,
                                      std::span<const double> epsilons,
                                      std::uint64_t trials,
                                      std::uint64_t seed) {
  CheckTrials(trials);
  spec.Validate(scenario);
  const int values = scenario.value_count();
  std::vector<Folds> folds;
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < values; ++c) {
    folds.push_back(SampleHistogram(scenario, spec, c,
                                    static_cast<std::uint64_t>(c), trials,
                                    seed));
    for (int w = 0; w < values; ++w) {
      if (w != c) pairs.emplace_back(c, w);
    }
  }
  std::vector<McEstimate> out;
  for (double eps : epsilons) out.push_back(CrossFit(folds, pairs, eps));
  return out;
}

McEstimate McDistinguish(const Scenario& scenario, const CompositionSpec& spec,
                         double epsilon, std::uint64_t trials,
                         std::uint64_t seed) {
  const double eps[] = {epsilon};
  return McDistinguish(scenario, spec, eps, trials, seed).front();
}

McEstimate McDistinguishPair(const Scenario& scenario,
                             const CompositionSpec& spec, int v, int w,
                             double epsilon, std::uint64_t trials,
                             std::uint64_t seed) {
  CheckTrials(trials);
  spec.Validate(scenario);
  const int values = scenario.value_count();
  if (v < 0 || v >= values || w < 0 || w >= values) {
    throw DomainError("McDistinguishPair: critical value outside W");
  }
  std::vector<Folds> folds;
  folds.push_back(SampleHistogram(scenario, spec, v,
                                  static_cast<std::uint64_t>(v), trials, seed));
  folds.push_back(SampleHistogram(
      scenario, spec, w,
      static_cast<std::uint64_t>(v == w ? values + w : w), trials, seed));
  return CrossFit(folds, {{0, 1}}, epsilon);
}

}  // namespace spacct

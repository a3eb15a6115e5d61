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


#include "spacct/verify.h"

#include <cmath>
#include <utility>

#include "spacct/rng.h"

namespace spacct {
namespace {

std::string Label(const char* kind, int n, int m, double p) {
  return std::string(kind) + " n=" + std::to_string(n) +
         " m=" + std::to_string(m) + " p=" + (p == 0.5 ? "0.5" : "0.2");
}

}  // namespace

std::vector<MatrixInstance> OracleMatrix() {
  std::vector<MatrixInstance> out;
  for (int n : {2, 4, 6, 8}) {
    for (int m : {1, 2}) {
      const TemplateFormat format{std::vector<int>(m, n / m)};
      for (double p : {0.2, 0.5}) {
        out.push_back(
            {Label("nonadaptive", n, m, p), Scenario::Iid(n, p),
             CompositionSpec{format,
                             std::vector<QueryDescriptor>(m, QueryDescriptor{})},
             CompositionMode::kNonadaptiveIid});
        if (m < 2) continue;
        const int threshold = (n / m + 1) / 2;
        out.push_back(
            {Label("adaptive", n, m, p), Scenario::IidAttributes(n, {p, 0.5}),
             CompositionSpec{format, AdaptiveTree::ThresholdSwitch(
                                         QueryDescriptor{0}, threshold,
                                         QueryDescriptor{1}, QueryDescriptor{0})},
             CompositionMode::kAdaptiveIid});
      }
    }
  }
  return out;
}

std::vector<double> OracleMatrixEpsilons() { return {0.0, 0.1, 1.0}; }

double TheoremBound(const Scenario& scenario, const CompositionSpec& spec,
                    CompositionMode mode, double epsilon) {
  switch (mode) {
    case CompositionMode::kNonadaptiveIid:
      return NonadaptiveIid(scenario, spec, epsilon).total_delta;
    case CompositionMode::kNonadaptiveGeneral:
      return NonadaptiveGeneral(scenario, spec, epsilon).total_delta;
    case CompositionMode::kAdaptiveIid:
      return AdaptiveIid(scenario, spec, epsilon).total_delta;
    case CompositionMode::kAdaptiveGeneral:
      return AdaptiveGeneral(scenario, spec, epsilon).total_delta;
  }
  return 1.0;
}

std::vector<VerifyRow> VerifyInstance(const MatrixInstance& instance,
                                      const std::vector<double>& epsilons,
                                      const VerifyOptions& options) {
  const ExactMechanismLaw law =
      BuildExactMechanismLaw(instance.scenario, instance.spec, options.oracle_cap);
  std::vector<McEstimate> mc;
  if (options.mc_trials) {
    mc = McDistinguish(instance.scenario, instance.spec, epsilons,
                       *options.mc_trials, options.seed);
  }
  std::vector<VerifyRow> rows;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    VerifyRow row;
    row.label = instance.label;
    row.epsilon = epsilons[i];
    row.exact = DHat(law.conditional, epsilons[i]);
    row.bound = TheoremBound(instance.scenario, instance.spec,
                             instance.bound_mode, epsilons[i]);
    row.margin = row.bound - row.exact;
    if (!mc.empty()) row.mc = mc[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<VerifyRow> RunOracleMatrix(const VerifyOptions& options) {
  const std::vector<double> epsilons = OracleMatrixEpsilons();
  std::vector<VerifyRow> rows;
  std::uint64_t index = 0;
  for (const MatrixInstance& instance : OracleMatrix()) {
    VerifyOptions per = options;
    per.seed = DeriveSeed(options.seed, index++);
    for (VerifyRow& row : VerifyInstance(instance, epsilons, per)) {
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

bool Dominated(const VerifyRow& row) { return row.margin >= -kDominationSlack; }

bool McConsistent(const VerifyRow& row) {
  if (!row.mc) return true;
  return std::abs(row.mc->estimate - row.exact) <=
         3.0 * row.mc->half_width + 1e-12;
}

}  // namespace spacct

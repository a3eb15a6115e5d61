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

#include "spacct/query.h"

#include <algorithm>
#include <vector>

#include "spacct/errors.h"

namespace spacct {

ConditionalLaws QueryKernel::CriticalLaws(const Scenario& scenario,
                                          std::span<const int> block) const {
  ConditionalLaws laws;
  for (int v = 0; v < scenario.value_count(); ++v) {
    laws.emplace(v, ConditionalAnswerLaw(scenario, block, v));
  }
  return laws;
}

Pmf PropertyQuery::AnswerLaw(const Scenario& scenario,
                             std::span<const int> block) const {
  std::vector<double> p;
  p.reserve(block.size());
  for (int i : block) p.push_back(scenario.probability(i, attribute_));
  return PoissonBinomial(p);
}

Pmf PropertyQuery::ConditionalAnswerLaw(const Scenario& scenario,
                                        std::span<const int> block,
                                        int critical_value) const {
  const int j = scenario.critical_index();
  if (std::find(block.begin(), block.end(), j) == block.end()) {
    throw DomainError("ConditionalAnswerLaw: block lacks the critical entry");
  }
  if (critical_value < 0 || critical_value >= scenario.value_count()) {
    throw DomainError("ConditionalAnswerLaw: critical value outside W");
  }
  std::vector<double> p;
  p.reserve(block.size());
  for (int i : block) {
    if (i != j) p.push_back(scenario.probability(i, attribute_));
  }
  return Shift(PoissonBinomial(p), (critical_value >> attribute_) & 1);
}

int PropertyQuery::Evaluate(std::span<const int> block,
                            std::span<const int> values) const {
  int count = 0;
  for (int i : block) {
    count += (values[static_cast<std::size_t>(i)] >> attribute_) & 1;
  }
  return count;
}

}  // namespace spacct

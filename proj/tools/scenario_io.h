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


#ifndef SPACCT_TOOLS_SCENARIO_IO_H_
#define SPACCT_TOOLS_SCENARIO_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spacct/compose.h"
#include "spacct/scenario.h"

namespace spacct {

inline constexpr int kScenarioSchemaVersion = 1;

enum class RunMode { kAuto, kEnumerate, kMonteCarlo };

// Parsed scenario document. Example:
//
//   {"schema_version": 1, "n": 4,
//    "entries": {"kind": "iid", "p": 0.5},
//    "format": [2, 2], "queries": [{"attribute": 0}, {"attribute": 0}],
//    "epsilons": [0, 0.1]}
//
// "entries.kind" is one of iid (p: number or per-attribute list), explicit
// (p: per-entry list, or list of per-attribute lists) and known (p, known,
// known_positive). An "adaptive" tree may replace "queries":
//
//   {"query": {"attribute": 0},
//    "branches": [{"below": 1, "then": {...}}, {"then": {...}}]}
struct ScenarioFile {
  Scenario scenario;
  CompositionSpec spec;
  std::vector<double> epsilons;
  RunMode mode = RunMode::kAuto;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  std::uint64_t template_cap = kDefaultTemplateCap;
  std::uint64_t prefix_cap = kDefaultPrefixCap;
};

// Throws DomainError with a one-line message on any schema violation,
// including unknown fields.
ScenarioFile ParseScenario(const std::string& text);
ScenarioFile LoadScenario(const std::string& path);

}  // namespace spacct

#endif  // SPACCT_TOOLS_SCENARIO_IO_H_

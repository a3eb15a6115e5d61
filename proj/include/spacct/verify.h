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


#ifndef SPACCT_VERIFY_H_
#define SPACCT_VERIFY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spacct/compose.h"
#include "spacct/oracle.h"
#include "spacct/scenario.h"

namespace spacct {

// A tiny instance whose exact mechanism law is enumerable, paired with the
// composition mode whose bound must dominate it.
struct MatrixInstance {
  std::string label;
  Scenario scenario;
  CompositionSpec spec;
  CompositionMode bound_mode;
};

// Enumeration cap large enough for the two-attribute adaptive instances.
inline constexpr std::uint64_t kMatrixOracleCap = 100'000'000;

// n in {2,4,6,8}, m in {1,2} equal blocks, iid p in {0.2,0.5}. Each
// combination appears as a nonadaptive property-query composition; for m = 2
// also as an adaptive one whose second query switches attribute on the first
// answer.
std::vector<MatrixInstance> OracleMatrix();

std::vector<double> OracleMatrixEpsilons();  // {0, 0.1, 1}

// The theorem bound for `spec` on `scenario` in `mode`.
double TheoremBound(const Scenario& scenario, const CompositionSpec& spec,
                    CompositionMode mode, double epsilon);

struct VerifyRow {
  std::string label;
  double epsilon = 0.0;
  double exact = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - exact
  std::optional<McEstimate> mc;
};

struct VerifyOptions {
  std::uint64_t oracle_cap = kMatrixOracleCap;
  std::optional<std::uint64_t> mc_trials;  // adds Monte-Carlo columns
  std::uint64_t seed = 0;
};

std::vector<VerifyRow> VerifyInstance(const MatrixInstance& instance,
                                      const std::vector<double>& epsilons,
                                      const VerifyOptions& options);

std::vector<VerifyRow> RunOracleMatrix(const VerifyOptions& options);

inline constexpr double kDominationSlack = 1e-9;

bool Dominated(const VerifyRow& row);
// |mc - exact| <= 3 half-widths; true when no Monte-Carlo column exists.
bool McConsistent(const VerifyRow& row);

}  // namespace spacct

#endif  // SPACCT_VERIFY_H_

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

#ifndef SPACCT_CURVE_H_
#define SPACCT_CURVE_H_

#include <map>
#include <span>
#include <vector>

#include "spacct/pmf.h"

namespace spacct {

struct CurvePoint {
  double epsilon;
  double delta;
};

// A sampled privacy curve: epsilons strictly increasing, deltas in [0,1] and
// nonincreasing. The constructor enforces both.
class PrivacyCurve {
 public:
  explicit PrivacyCurve(std::vector<CurvePoint> points);

  std::span<const CurvePoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  // Smallest recorded delta among points with epsilon <= `epsilon`; 1 when
  // no such point exists.
  double DeltaAt(double epsilon) const;

 private:
  std::vector<CurvePoint> points_;
};

// Critical-entry value -> law of the released answer given that value.
using ConditionalLaws = std::map<int, Pmf>;

// Hockey-stick divergence sum_a max(0, p(a) - e^eps q(a)) over the union
// support. Summed left to right so the result is nonincreasing in epsilon
// even in floating point.
double HockeyStick(const Pmf& p, const Pmf& q, double epsilon);

// sum_a |p(a) - q(a)| / 2.
double TotalVariation(const Pmf& p, const Pmf& q);

// True when p(a)/q(a) is monotone (in either direction) over the points
// where at least one of them is positive.
bool HasMonotoneLikelihoodRatio(const Pmf& p, const Pmf& q);

// Threshold form of HockeyStick for pairs with a monotone likelihood ratio:
// P(A in T) - e^eps Q(A in T) for the tail T starting at the first point
// where p > e^eps q. Ties at the boundary contribute zero and are excluded.
// Throws DomainError when the ratio is not monotone.
double HockeyStickThreshold(const Pmf& p, const Pmf& q, double epsilon);

enum class HockeyStickMethod { kDirect, kThreshold };

// Maximum over ordered pairs of distinct critical values.
double DHat(const ConditionalLaws& laws, double epsilon,
            HockeyStickMethod method = HockeyStickMethod::kDirect);

// Count of positive entries among `size` Bernoulli(p) entries when the
// critical one is fixed to `critical_value`.
Pmf PropertyQueryAnswerLaw(int size, double p, int critical_value);

// Both conditional laws of a property query over `size` iid entries.
ConditionalLaws PropertyQueryLaws(int size, double p);

// Throws DomainError unless `epsilons` is strictly increasing and >= 0.
void ValidateEpsilonGrid(std::span<const double> epsilons);

PrivacyCurve EvalCurve(const ConditionalLaws& laws,
                       std::span<const double> epsilons);

// {0.005, 0.01, 0.02, 0.05, 0.1, 0.2}.
std::vector<double> DefaultEpsilonGrid();

}  // namespace spacct

#endif  // SPACCT_CURVE_H_

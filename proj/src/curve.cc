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

#include "spacct/curve.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "spacct/errors.h"

namespace spacct {

PrivacyCurve::PrivacyCurve(std::vector<CurvePoint> points)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const CurvePoint& pt = points_[i];
    if (!(pt.epsilon >= 0.0) || !(pt.delta >= 0.0 && pt.delta <= 1.0)) {
      throw DomainError("PrivacyCurve: point out of range");
    }
    if (i > 0) {
      if (!(pt.epsilon > points_[i - 1].epsilon)) {
        throw DomainError("PrivacyCurve: epsilons must increase strictly");
      }
      if (pt.delta > points_[i - 1].delta) {
        throw DomainError("PrivacyCurve: delta increases with epsilon");
      }
    }
  }
}

double PrivacyCurve::DeltaAt(double epsilon) const {
  double best = 1.0;
  for (const CurvePoint& pt : points_) {
    if (pt.epsilon > epsilon) break;
    best = pt.delta;
  }
  return best;
}

double HockeyStick(const Pmf& p, const Pmf& q, double epsilon) {
  const double scale = std::exp(epsilon);
  const int lo = std::min(p.min_support(), q.min_support());
  const int hi = std::max(p.max_support(), q.max_support());
  double total = 0.0;
  for (int a = lo; a <= hi; ++a) {
    const double d = p.mass(a) - scale * q.mass(a);
    if (d > 0.0) total += d;
  }
  return std::clamp(total, 0.0, 1.0);
}

double TotalVariation(const Pmf& p, const Pmf& q) {
  const int lo = std::min(p.min_support(), q.min_support());
  const int hi = std::max(p.max_support(), q.max_support());
  double total = 0.0;
  for (int a = lo; a <= hi; ++a) total += std::fabs(p.mass(a) - q.mass(a));
  return total / 2.0;
}

namespace {

// Sign of p(a)/q(a) - p(b)/q(b), cross-multiplied so zeros need no special
// casing. Points where both masses vanish carry no ratio.
int CompareRatios(double pa, double qa, double pb, double qb) {
  const double lhs = pa * qb;
  const double rhs = pb * qa;
  return (lhs > rhs) - (lhs < rhs);
}

}  // namespace

bool HasMonotoneLikelihoodRatio(const Pmf& p, const Pmf& q) {
  const int lo = std::min(p.min_support(), q.min_support());
  const int hi = std::max(p.max_support(), q.max_support());
  int direction = 0;
  bool have_prev = false;
  double prev_p = 0.0;
  double prev_q = 0.0;
  for (int a = lo; a <= hi; ++a) {
    const double pa = p.mass(a);
    const double qa = q.mass(a);
    if (pa == 0.0 && qa == 0.0) continue;
    if (have_prev) {
      const int c = CompareRatios(pa, qa, prev_p, prev_q);
      if (c != 0) {
        if (direction == 0) {
          direction = c;
        } else if (c != direction) {
          return false;
        }
      }
    }
    have_prev = true;
    prev_p = pa;
    prev_q = qa;
  }
  return true;
}

double HockeyStickThreshold(const Pmf& p, const Pmf& q, double epsilon) {
  if (!HasMonotoneLikelihoodRatio(p, q)) {
    throw DomainError("HockeyStickThreshold: likelihood ratio not monotone");
  }
  const double scale = std::exp(epsilon);
  const int lo = std::min(p.min_support(), q.min_support());
  const int hi = std::max(p.max_support(), q.max_support());
  // With a monotone ratio the set {p > e^eps q} is an interval touching one
  // end of the support. Locate its boundary, then take tail sums.
  int first = hi + 1;
  int last = lo - 1;
  for (int a = lo; a <= hi; ++a) {
    if (p.mass(a) > scale * q.mass(a)) {
      first = std::min(first, a);
      last = std::max(last, a);
    }
  }
  if (first > last) return 0.0;
  double tail_p = 0.0;
  double tail_q = 0.0;
  for (int a = first; a <= last; ++a) {
    tail_p += p.mass(a);
    tail_q += q.mass(a);
  }
  return std::clamp(tail_p - scale * tail_q, 0.0, 1.0);
}

double DHat(const ConditionalLaws& laws, double epsilon,
            HockeyStickMethod method) {
  if (laws.size() < 2) {
    throw DomainError("DHat: need at least two critical values");
  }
  double best = 0.0;
  for (const auto& [v, pv] : laws) {
    for (const auto& [w, pw] : laws) {
      if (v == w) continue;
      const double d = method == HockeyStickMethod::kDirect
                           ? HockeyStick(pv, pw, epsilon)
                           : HockeyStickThreshold(pv, pw, epsilon);
      best = std::max(best, d);
    }
  }
  return best;
}

Pmf PropertyQueryAnswerLaw(int size, double p, int critical_value) {
  if (size < 1) throw DomainError("PropertyQueryAnswerLaw: size must be >= 1");
  if (critical_value != 0 && critical_value != 1) {
    throw DomainError("PropertyQueryAnswerLaw: critical value must be 0 or 1");
  }
  return Shift(Binomial(size - 1, p), critical_value);
}

ConditionalLaws PropertyQueryLaws(int size, double p) {
  ConditionalLaws laws;
  laws.emplace(0, PropertyQueryAnswerLaw(size, p, 0));
  laws.emplace(1, PropertyQueryAnswerLaw(size, p, 1));
  return laws;
}

void ValidateEpsilonGrid(std::span<const double> epsilons) {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] >= 0.0) || !std::isfinite(epsilons[i])) {
      throw DomainError("epsilon grid: values must be finite and >= 0");
    }
    if (i > 0 && !(epsilons[i] > epsilons[i - 1])) {
      throw DomainError("epsilon grid: values must increase strictly");
    }
  }
}

PrivacyCurve EvalCurve(const ConditionalLaws& laws,
                       std::span<const double> epsilons) {
  ValidateEpsilonGrid(epsilons);
  std::vector<CurvePoint> points;
  points.reserve(epsilons.size());
  for (double eps : epsilons) points.push_back({eps, DHat(laws, eps)});
  return PrivacyCurve(std::move(points));
}

std::vector<double> DefaultEpsilonGrid() {
  return {0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
}

}  // namespace spacct

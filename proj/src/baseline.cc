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

#include "spacct/baseline.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "spacct/errors.h"
#include "spacct/numerics.h"

namespace spacct {

AccuracyFigure MseIncrease(int n, int sample_size, double p) {
  if (sample_size < 1 || sample_size > n) {
    throw DomainError("MseIncrease: need 1 <= s <= n");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("MseIncrease: p outside [0,1]");
  const double var = p * (1.0 - p);
  const double mse = std::max(
      0.0, var / static_cast<double>(sample_size) - var / static_cast<double>(n));
  return {mse, std::sqrt(mse)};
}

double GaussianSigmaFor(double epsilon0, double delta0, double sensitivity) {
  if (!(epsilon0 > 0.0) || !(delta0 > 0.0 && delta0 < 1.0) ||
      !(sensitivity > 0.0)) {
    throw DomainError(
        "GaussianSigmaFor: need epsilon0 > 0, 0 < delta0 < 1, sensitivity > 0");
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta0)) / epsilon0;
}

double GaussianEpsilonFor(double sigma, double delta0, double sensitivity) {
  if (!(sigma > 0.0) || !(delta0 > 0.0 && delta0 < 1.0) ||
      !(sensitivity > 0.0)) {
    throw DomainError(
        "GaussianEpsilonFor: need sigma > 0, 0 < delta0 < 1, sensitivity > 0");
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta0)) / sigma;
}

double KovDeltaTerm(double epsilon0, int k, int i) {
  if (k < 1 || i < 0 || 2 * i > k) {
    throw DomainError("KovDeltaTerm: need k >= 1 and 0 <= i <= k/2");
  }
  if (epsilon0 == 0.0) return 0.0;
  // C(k,l) (e^{(k-l)e} - e^{(k-2i+l)e}) / (1+e^e)^k
  //   = exp(log C(k,l) + (k-l)e - k log(1+e^e)) * (1 - e^{-2(i-l)e}).
  const double log_norm = static_cast<double>(k) * std::log1p(std::exp(epsilon0));
  CompensatedSum acc;
  for (int l = 0; l < i; ++l) {
    const double head = LogChoose(k, l) + static_cast<double>(k - l) * epsilon0 -
                        log_norm;
    const double tail = -std::expm1(-2.0 * static_cast<double>(i - l) * epsilon0);
    acc.Add(std::exp(head) * tail);
  }
  return std::clamp(acc.Result(), 0.0, 1.0);
}

namespace {

double WithDelta0(double delta_term, double delta0, int k) {
  const double keep = std::exp(static_cast<double>(k) * std::log1p(-delta0));
  return std::clamp(1.0 - keep * (1.0 - delta_term), 0.0, 1.0);
}

void CheckKovArgs(double epsilon0, double delta0, int k) {
  if (k < 1) throw DomainError("KOV composition: need k >= 1");
  if (!(epsilon0 >= 0.0) || !std::isfinite(epsilon0)) {
    throw DomainError("KOV composition: epsilon0 must be finite and >= 0");
  }
  if (!(delta0 >= 0.0 && delta0 < 1.0)) {
    throw DomainError("KOV composition: delta0 must lie in [0, 1)");
  }
}

}  // namespace

PrivacyCurve KovCompose(double epsilon0, double delta0, int k) {
  CheckKovArgs(epsilon0, delta0, k);
  if (epsilon0 == 0.0) {
    return PrivacyCurve({{0.0, WithDelta0(0.0, delta0, k)}});
  }
  std::vector<CurvePoint> points;
  for (int i = k / 2; i >= 0; --i) {
    points.push_back({static_cast<double>(k - 2 * i) * epsilon0,
                      WithDelta0(KovDeltaTerm(epsilon0, k, i), delta0, k)});
  }
  return PrivacyCurve(std::move(points));
}

double KovDeltaAtMost(double epsilon0, double delta0, int k,
                      double target_epsilon) {
  CheckKovArgs(epsilon0, delta0, k);
  if (epsilon0 == 0.0) return WithDelta0(0.0, delta0, k);
  // Smallest i with (k - 2i) epsilon0 <= target; a relative slack absorbs
  // the rounding of target / epsilon0.
  const double ratio = target_epsilon / epsilon0 * (1.0 + 1e-12);
  int i = 0;
  if (static_cast<double>(k) > ratio) {
    i = static_cast<int>(std::ceil((static_cast<double>(k) - ratio) / 2.0));
  }
  if (2 * i > k) return 1.0;
  return WithDelta0(KovDeltaTerm(epsilon0, k, i), delta0, k);
}

double AdvancedCompositionEpsilon(double epsilon0, int k, double delta_slack) {
  if (k < 1 || !(delta_slack > 0.0 && delta_slack < 1.0)) {
    throw DomainError("AdvancedCompositionEpsilon: need k >= 1, 0 < delta' < 1");
  }
  const double kd = static_cast<double>(k);
  return std::sqrt(2.0 * kd * std::log(1.0 / delta_slack)) * epsilon0 +
         kd * epsilon0 * std::expm1(epsilon0);
}

DpCalibration MaxDpQueries(double target_epsilon, double target_delta,
                           double sigma_target, int n,
                           const DpSearchOptions& options) {
  if (!(sigma_target > 0.0) || n < 1 || !(target_delta > 0.0 && target_delta < 1.0) ||
      !(target_epsilon >= 0.0) || options.delta0_grid_points < 2) {
    throw DomainError("MaxDpQueries: invalid targets");
  }
  const double sensitivity = 1.0 / static_cast<double>(n);
  const double low = target_delta * options.grid_low_fraction;
  const double high = target_delta * options.grid_high_fraction;
  DpCalibration best;
  best.sensitivity = sensitivity;
  best.gaussian_sigma = sigma_target;
  for (int g = 0; g < options.delta0_grid_points; ++g) {
    const double t = static_cast<double>(g) /
                     static_cast<double>(options.delta0_grid_points - 1);
    const double delta0 = low * std::pow(high / low, t);
    const double epsilon0 = GaussianEpsilonFor(sigma_target, delta0, sensitivity);
    auto feasible = [&](int k) {
      return KovDeltaAtMost(epsilon0, delta0, k, target_epsilon) <= target_delta;
    };
    // Queries are asked one after another, so k counts only if every
    // k' <= k is feasible. The achievable epsilons (k - 2i) epsilon0 depend
    // on the parity of k and feasibility is monotone only within a parity
    // class: bisect each class k = 2t + r for its first infeasible k.
    int first_bad = options.k_limit + 1;
    for (int r = 1; r <= 2; ++r) {
      auto k_of = [r](int t) { return 2 * t + r; };
      const int t_max = (options.k_limit - r) / 2;
      if (t_max < 0) continue;
      if (!feasible(k_of(0))) {
        first_bad = std::min(first_bad, k_of(0));
        continue;
      }
      int lo = 0;  // feasible
      int hi = 1;  // infeasible, or t_max + 1 for none within the limit
      while (hi <= t_max && feasible(k_of(hi))) {
        lo = hi;
        hi = hi > t_max / 2 ? t_max + 1 : hi * 2;
      }
      while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (feasible(k_of(mid)) ? lo : hi) = mid;
      }
      if (hi <= t_max) first_bad = std::min(first_bad, k_of(hi));
    }
    const int good = first_bad - 1;
    if (good > best.k_max) {
      best.k_max = good;
      best.per_query_delta = delta0;
      best.per_query_epsilon = epsilon0;
    }
  }
  return best;
}

}  // namespace spacct

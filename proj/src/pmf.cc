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

#include "spacct/pmf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "spacct/errors.h"
#include "spacct/numerics.h"

namespace spacct {
namespace {

void CheckProbability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + ": probability " +
                      std::to_string(p) + " outside [0,1]");
  }
}

// Exponentiates log-masses relative to their maximum and normalizes with a
// compensated total.
std::vector<double> NormalizeLogMasses(const std::vector<double>& log_masses) {
  const double top =
      *std::max_element(log_masses.begin(), log_masses.end());
  std::vector<double> masses(log_masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    masses[i] = std::exp(log_masses[i] - top);
  }
  const double total = CompensatedTotal(masses);
  for (double& m : masses) m /= total;
  return masses;
}

}  // namespace

Pmf::Pmf(int offset, std::vector<double> masses)
    : offset_(offset), masses_(std::move(masses)) {
  if (masses_.empty()) throw DomainError("Pmf: empty support");
  for (double m : masses_) {
    if (!std::isfinite(m) || m < 0.0) {
      throw DomainError("Pmf: mass must be finite and nonnegative");
    }
  }
  const double total = Total();
  if (std::fabs(total - 1.0) > kNormalizationTolerance) {
    throw DomainError("Pmf: masses sum to " + std::to_string(total));
  }
}

Pmf Pmf::PointMass(int at) { return Pmf(at, {1.0}); }

double Pmf::mass(int a) const {
  if (a < offset_ || a > max_support()) return 0.0;
  return masses_[static_cast<std::size_t>(a - offset_)];
}

double Pmf::Total() const { return CompensatedTotal(masses_); }

double Pmf::Mean() const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    acc.Add(static_cast<double>(offset_ + static_cast<int>(i)) * masses_[i]);
  }
  return acc.Result();
}

double Pmf::Variance() const {
  const double mean = Mean();
  CompensatedSum acc;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    const double d = static_cast<double>(offset_ + static_cast<int>(i)) - mean;
    acc.Add(d * d * masses_[i]);
  }
  return acc.Result();
}

Pmf Pmf::Trimmed(double floor) const {
  std::size_t lo = 0;
  std::size_t hi = masses_.size();
  double removed = 0.0;
  while (hi - lo > 1 && masses_[lo] < floor &&
         removed + masses_[lo] <= 1e-12) {
    removed += masses_[lo++];
  }
  while (hi - lo > 1 && masses_[hi - 1] < floor &&
         removed + masses_[hi - 1] <= 1e-12) {
    removed += masses_[--hi];
  }
  if (lo == 0 && hi == masses_.size()) return *this;
  return Pmf(offset_ + static_cast<int>(lo),
             std::vector<double>(masses_.begin() + lo, masses_.begin() + hi));
}

Pmf Binomial(int trials, double p) {
  if (trials < 0) throw DomainError("Binomial: negative trial count");
  CheckProbability(p, "Binomial");
  const auto n = static_cast<std::size_t>(trials);
  if (p == 0.0 || p == 1.0) {
    std::vector<double> masses(n + 1, 0.0);
    masses[p == 0.0 ? 0 : n] = 1.0;
    return Pmf(0, std::move(masses));
  }
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double t = static_cast<double>(trials);
  std::vector<double> log_masses(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    log_masses[k] = LogChoose(t, kd) + kd * log_p + (t - kd) * log_q;
  }
  if (p == 0.5) {
    // Mirror the lower half so mass(k) == mass(trials - k) bit for bit,
    // independent of how lgamma rounds at the two ends.
    for (std::size_t k = 0; k <= n / 2; ++k) log_masses[n - k] = log_masses[k];
  }
  return Pmf(0, NormalizeLogMasses(log_masses));
}

Pmf Hypergeometric(int population, int successes, int draws) {
  if (population < 0 || successes < 0 || draws < 0 ||
      successes > population || draws > population) {
    throw DomainError("Hypergeometric: need 0 <= successes, draws <= population");
  }
  const int lo = std::max(0, draws - (population - successes));
  const int hi = std::min(draws, successes);
  std::vector<double> log_masses(static_cast<std::size_t>(hi - lo + 1));
  const double log_total = LogChoose(population, draws);
  for (int z = lo; z <= hi; ++z) {
    log_masses[static_cast<std::size_t>(z - lo)] =
        LogChoose(successes, z) +
        LogChoose(population - successes, draws - z) - log_total;
  }
  return Pmf(lo, NormalizeLogMasses(log_masses));
}

Pmf PoissonBinomial(std::span<const double> probabilities) {
  std::vector<double> masses{1.0};
  masses.reserve(probabilities.size() + 1);
  for (double p : probabilities) {
    CheckProbability(p, "PoissonBinomial");
    masses.push_back(0.0);
    for (std::size_t k = masses.size() - 1; k > 0; --k) {
      masses[k] = masses[k] * (1.0 - p) + masses[k - 1] * p;
    }
    masses[0] *= (1.0 - p);
  }
  return Pmf(0, std::move(masses));
}

double Cdf(const Pmf& d, int x) {
  if (x < d.min_support()) return 0.0;
  const int top = std::min(x, d.max_support());
  CompensatedSum acc;
  for (int a = d.min_support(); a <= top; ++a) acc.Add(d.mass(a));
  return acc.Result();
}

Pmf Shift(const Pmf& d, int k) {
  return Pmf(d.offset() + k,
             std::vector<double>(d.masses().begin(), d.masses().end()));
}

Pmf Convolve(const Pmf& a, const Pmf& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  const auto am = a.masses();
  const auto bm = b.masses();
  for (std::size_t i = 0; i < am.size(); ++i) {
    if (am[i] == 0.0) continue;
    for (std::size_t j = 0; j < bm.size(); ++j) out[i + j] += am[i] * bm[j];
  }
  return Pmf(a.offset() + b.offset(), std::move(out));
}

Pmf Mixture(std::span<const WeightedPmf> components) {
  if (components.empty()) throw DomainError("Mixture: no components");
  CompensatedSum weight_sum;
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& c : components) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw DomainError("Mixture: negative or non-finite weight");
    }
    weight_sum.Add(c.weight);
    lo = std::min(lo, c.pmf.min_support());
    hi = std::max(hi, c.pmf.max_support());
  }
  if (std::fabs(weight_sum.Result() - 1.0) > Pmf::kNormalizationTolerance) {
    throw DomainError("Mixture: weights sum to " +
                      std::to_string(weight_sum.Result()));
  }
  std::vector<double> masses(static_cast<std::size_t>(hi - lo + 1));
  for (int a = lo; a <= hi; ++a) {
    CompensatedSum acc;
    for (const auto& c : components) acc.Add(c.weight * c.pmf.mass(a));
    masses[static_cast<std::size_t>(a - lo)] = acc.Result();
  }
  return Pmf(lo, std::move(masses));
}

}  // namespace spacct

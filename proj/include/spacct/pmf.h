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

#ifndef SPACCT_PMF_H_
#define SPACCT_PMF_H_

#include <cstddef>
#include <span>
#include <vector>

namespace spacct {

// A probability mass function over a contiguous integer range
// [offset, offset + size). Interior zeros are allowed. Instances are
// immutable once constructed and always normalized to within
// kNormalizationTolerance.
class Pmf {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;
  static constexpr double kSupportFloor = 1e-300;

  // Throws DomainError on an empty, negative, non-finite or unnormalized
  // mass vector.
  Pmf(int offset, std::vector<double> masses);

  static Pmf PointMass(int at);

  int offset() const { return offset_; }
  int min_support() const { return offset_; }
  int max_support() const {
    return offset_ + static_cast<int>(masses_.size()) - 1;
  }
  std::size_t size() const { return masses_.size(); }
  std::span<const double> masses() const { return masses_; }

  // Zero outside the stored range.
  double mass(int a) const;

  double Total() const;
  double Mean() const;
  double Variance() const;

  // Drops leading and trailing masses below `floor`. Never trims a range
  // whose removal would change the total by more than 1e-12, and never
  // returns an empty pmf.
  Pmf Trimmed(double floor = kSupportFloor) const;

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  int offset_;
  std::vector<double> masses_;
};

// Binomial(trials, p) on {0..trials}, built from log-gamma terms. For
// p == 1/2 the masses are exactly symmetric.
Pmf Binomial(int trials, double p);

// Number of marked items among `draws` drawn without replacement from
// `population` items of which `successes` are marked.
Pmf Hypergeometric(int population, int successes, int draws);

// Sum of independent Bernoulli(probabilities[i]) variables, by iterated
// convolution.
Pmf PoissonBinomial(std::span<const double> probabilities);

double Cdf(const Pmf& d, int x);

Pmf Shift(const Pmf& d, int k);

Pmf Convolve(const Pmf& a, const Pmf& b);

struct WeightedPmf {
  double weight;
  Pmf pmf;
};

// Pointwise weighted sum; weights must be nonnegative and sum to one.
Pmf Mixture(std::span<const WeightedPmf> components);

}  // namespace spacct

#endif  // SPACCT_PMF_H_

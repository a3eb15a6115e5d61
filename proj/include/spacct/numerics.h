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

#ifndef SPACCT_NUMERICS_H_
#define SPACCT_NUMERICS_H_

#include <cmath>
#include <span>

namespace spacct {

// Neumaier's variant of Kahan summation. Order-sensitive; the callers that
// need monotonicity of a sum in its terms (hockey-stick evaluation) use plain
// left-to-right addition instead.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double Result() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double CompensatedTotal(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.Add(v);
  return acc.Result();
}

// log C(n, k) via log-gamma; requires 0 <= k <= n.
inline double LogChoose(double n, double k) {
  return std::lgamma(n + 1.0) - (std::lgamma(k + 1.0) + std::lgamma(n - k + 1.0));
}

}  // namespace spacct

#endif  // SPACCT_NUMERICS_H_

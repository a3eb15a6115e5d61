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

#ifndef SPACCT_BASELINE_H_
#define SPACCT_BASELINE_H_

#include <vector>

#include "spacct/curve.h"

namespace spacct {

// Accuracy cost of answering a fraction-valued property query on a sample
// of size s instead of the full database of size n.
struct AccuracyFigure {
  double mse_increase;    // squared answer units
  double sigma_increase;  // sqrt(mse_increase)
};

AccuracyFigure MseIncrease(int n, int sample_size, double p);

// Classical Gaussian-mechanism calibration
//   sigma = sensitivity * sqrt(2 ln(1.25 / delta0)) / epsilon0.
double GaussianSigmaFor(double epsilon0, double delta0, double sensitivity);

// Inverse of GaussianSigmaFor in epsilon0.
double GaussianEpsilonFor(double sigma, double delta0, double sensitivity);

// Optimal k-fold composition of an (epsilon0, delta0)-DP mechanism: the
// points ((k - 2i) epsilon0, 1 - (1 - delta0)^k (1 - delta_i)) for
// i = 0..floor(k/2), in increasing epsilon.
PrivacyCurve KovCompose(double epsilon0, double delta0, int k);

// delta_i of the composition above (without the delta0 part), computed in
// log space.
double KovDeltaTerm(double epsilon0, int k, int i);

// Smallest composed delta among KovCompose points with epsilon <= target, or
// 1 when no point qualifies. Runs in O(k) without building the curve.
double KovDeltaAtMost(double epsilon0, double delta0, int k,
                      double target_epsilon);

// Advanced composition bound: for k-fold (epsilon0, delta0) and slack
// delta', epsilon = sqrt(2k ln(1/delta')) epsilon0 + k epsilon0 (e^eps0 - 1)
// at delta = k delta0 + delta'.
double AdvancedCompositionEpsilon(double epsilon0, int k, double delta_slack);

struct DpCalibration {
  double per_query_epsilon = 0.0;
  double per_query_delta = 0.0;
  double gaussian_sigma = 0.0;
  double sensitivity = 0.0;
  int k_max = 0;
};

struct DpSearchOptions {
  int delta0_grid_points = 64;
  double grid_low_fraction = 1e-6;
  double grid_high_fraction = 0.999;
  int k_limit = 1 << 24;
};

// Largest number of Gaussian-noised fraction queries on the full database
// (sensitivity 1/n, noise standard deviation sigma_target) whose optimal
// composition meets (target_epsilon, target_delta) for every count up to
// and including it, maximized over a logarithmic grid of per-query delta0.
DpCalibration MaxDpQueries(double target_epsilon, double target_delta,
                           double sigma_target, int n,
                           const DpSearchOptions& options = {});

}  // namespace spacct

#endif  // SPACCT_BASELINE_H_

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


// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when any
// gated criterion fails. The query-count comparison is reported but not
// gated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spacct/compose.h"
#include "spacct/curve.h"
#include "spacct/oracle.h"
#include "spacct/scenario.h"
#include "spacct/spc.h"
#include "spacct/tables.h"
#include "spacct/verify.h"

namespace spacct {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool Report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id,
              detail.c_str());
  return ok;
}

CompositionSpec EqualBlocks(int n, int m, QueryDescriptor q = {}) {
  return {TemplateFormat{std::vector<int>(m, n / m)},
          std::vector<QueryDescriptor>(m, q)};
}

// Criteria 1 and 2.
bool DeltaColumns(int id, TableId table, double time_limit,
                  std::vector<CellCheck>* checks) {
  const auto start = Clock::now();
  const std::vector<TableCell> cells = ComputeTable(GetTableSpec(table));
  const double elapsed = Seconds(start);
  *checks = CheckTable(table, cells);
  int ok = 0;
  double worst = 0.0;
  for (const CellCheck& c : *checks) {
    ok += c.delta_ok;
    worst = std::max(worst,
                     std::abs(c.computed.delta_sp - c.published.delta));
    if (!c.delta_ok) {
      std::printf("  m=%d eps=%g: delta %.6f vs printed %.4f\n",
                  c.computed.m, c.computed.epsilon, c.computed.delta_sp,
                  c.published.delta);
    }
    if (c.published.note != nullptr && *c.published.note != '\0') {
      std::printf("  m=%d eps=%g: %s\n", c.computed.m, c.computed.epsilon,
                  c.published.note);
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%s delta %d/%zu cells within %.4f (max deviation %.2e), "
                "%.2f s (limit %.0f s)",
                GetTableSpec(table).name.c_str(), ok, checks->size(),
                kDeltaTolerance, worst, elapsed, time_limit);
  return Report(id, ok == static_cast<int>(checks->size()) &&
                        elapsed < time_limit,
                detail);
}

bool SigmaColumns(const std::vector<CellCheck>& one,
                  const std::vector<CellCheck>& two) {
  int ok = 0;
  int total = 0;
  for (const auto* checks : {&one, &two}) {
    for (const CellCheck& c : *checks) {
      ++total;
      ok += c.sigma_ok;
      if (!c.sigma_ok) {
        std::printf("  m=%d: sigma %.6f vs printed %.4f\n", c.computed.m,
                    c.computed.sigma, c.published.sigma);
      }
    }
  }
  return Report(3, ok == total,
                std::to_string(ok) + "/" + std::to_string(total) +
                    " sigma cells within 0.0001");
}

void QueryCounts(const std::vector<CellCheck>& one,
                 const std::vector<CellCheck>& two) {
  int ok = 0;
  int total = 0;
  for (const auto* checks : {&one, &two}) {
    for (const CellCheck& c : *checks) {
      ++total;
      ok += c.dp_ok;
      std::printf("  n=%d m=%d eps=%g: dp_queries %d vs printed %d%s\n",
                  checks == &one ? 32768 : 1024, c.computed.m,
                  c.computed.epsilon, c.computed.dp.k_max,
                  c.published.dp_queries, c.dp_ok ? "" : " (outside)");
    }
  }
  std::printf("DIAG criterion 4: %d/%d dp_queries cells within max(2, 50%%)"
              " (diagnostic, not gated)\n",
              ok, total);
}

bool OracleDomination() {
  const auto start = Clock::now();
  const std::vector<VerifyRow> rows = RunOracleMatrix({});
  const double elapsed = Seconds(start);
  int dominated = 0;
  double min_margin = 1.0;
  for (const VerifyRow& r : rows) {
    dominated += Dominated(r);
    min_margin = std::min(min_margin, r.margin);
    if (!Dominated(r)) {
      std::printf("  %s eps=%g: exact %.12f > bound %.12f\n", r.label.c_str(),
                  r.epsilon, r.exact, r.bound);
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d/%zu matrix rows dominated (min margin %.3g), %.2f s "
                "(limit 60 s)",
                dominated, rows.size(), min_margin, elapsed);
  return Report(5, dominated == static_cast<int>(rows.size()) &&
                       rows.size() == 72 && elapsed < 60.0,
                detail);
}

bool CollapseIdentities() {
  double worst = 0.0;
  const std::vector<double> grid = {0.0, 0.05, 0.2, 1.0};
  auto track = [&](double a, double b) {
    worst = std::max(worst, std::abs(a - b));
  };
  for (auto [n, m, p] : {std::tuple{8, 2, 0.5}, std::tuple{9, 3, 0.3},
                         std::tuple{12, 2, 0.7}, std::tuple{10, 5, 0.1}}) {
    const Scenario s = Scenario::Iid(n, p, 2);
    const CompositionSpec spec = EqualBlocks(n, m);
    for (double eps : grid) {
      const double iid = NonadaptiveIid(s, spec, eps).total_delta;
      track(NonadaptiveGeneral(s, spec, eps).total_delta, iid);
      track(iid, DHat(PropertyQueryLaws(n / m, p), eps));
    }
  }
  for (int m : {2, 8, 64, 512}) {
    for (double eps : grid) {
      track(NonadaptiveIid(Scenario::Iid(32768, 0.5), EqualBlocks(32768, m),
                           eps)
                .total_delta,
            DHat(PropertyQueryLaws(32768 / m, 0.5), eps));
    }
  }
  const Scenario two = Scenario::IidAttributes(8, {0.4, 0.6}, 3);
  AdaptiveTree deep = AdaptiveTree::ThresholdSwitch({1}, 1, {0}, {1});
  deep.AddChild(1, 2, {1});
  deep.AddChild(1, std::nullopt, {0});
  deep.AddChild(2, std::nullopt, {0});
  const std::vector<CompositionSpec> adaptive = {
      {TemplateFormat{{4, 4}},
       AdaptiveTree::ThresholdSwitch({0}, 2, {1}, {0})},
      {TemplateFormat{{3, 3, 2}}, deep},
  };
  for (const CompositionSpec& spec : adaptive) {
    for (double eps : grid) {
      track(AdaptiveGeneral(two, spec, eps).total_delta,
            AdaptiveIid(two, spec, eps).total_delta);
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "general = iid and equal blocks = single D-hat, max "
                "deviation %.2e (limit 1e-12)",
                worst);
  return Report(6, worst <= 1e-12, detail);
}

bool CurveProperties() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> size_dist(1, 300);
  std::uniform_real_distribution<double> p_dist(0.01, 0.99);
  std::uniform_real_distribution<double> eps_dist(0.0, 2.0);
  int failures = 0;
  double worst = 0.0;
  for (int instance = 0; instance < 100; ++instance) {
    const int size = size_dist(rng);
    const double p = p_dist(rng);
    std::vector<double> grid = {0.0};
    for (int i = 0; i < 20; ++i) grid.push_back(eps_dist(rng));
    std::sort(grid.begin(), grid.end());
    const Pmf one = PropertyQueryAnswerLaw(size, p, 1);
    const Pmf zero = PropertyQueryAnswerLaw(size, p, 0);
    for (const auto& [a, b] : {std::pair{&one, &zero}, std::pair{&zero, &one}}) {
      double previous = 2.0;
      for (double eps : grid) {
        const double direct = HockeyStick(*a, *b, eps);
        const double threshold = HockeyStickThreshold(*a, *b, eps);
        worst = std::max(worst, std::abs(direct - threshold));
        if (direct > previous || direct < 0.0 || direct > 1.0 ||
            std::abs(direct - threshold) > 1e-12) {
          ++failures;
        }
        if (eps == 0.0 && std::abs(direct - TotalVariation(*a, *b)) > 1e-12) {
          ++failures;
        }
        previous = direct;
      }
    }
  }
  char detail[140];
  std::snprintf(detail, sizeof(detail),
                "100 random instances, %d violations, threshold vs direct "
                "max deviation %.2e",
                failures, worst);
  return Report(7, failures == 0, detail);
}

bool KnownEntries() {
  int failures = 0;
  int bounds = 0;
  double worst_sum = 0.0;
  for (int n : {8, 17, 32, 64}) {
    for (int v : {0, 1, n / 4, n / 2, n - 2}) {
      for (int s : {2, 3, n / 2, n}) {
        if (s < 2) continue;
        const Scenario scn = Scenario::Known(n, 0.4, v, v / 2);
        for (KnownPopulation pop :
             {KnownPopulation::kAllEntries, KnownPopulation::kNonCritical}) {
          worst_sum = std::max(
              worst_sum, std::abs(KnownEntriesWeights(scn, s, pop).Total() - 1));
          for (double eps : {0.0, 0.1, 0.5}) {
            const double exact = SpcKnownEntries(scn, s, eps, pop);
            for (int phi = 0; phi < s - 1; ++phi) {
              ++bounds;
              if (SpcKnownEntriesThresholdBound(scn, s, eps, phi, pop) <
                  exact - 1e-12) {
                ++failures;
              }
            }
            if (v == 0 &&
                exact != SpcIid(Scenario::Iid(n, 0.4), s, eps)) {
              ++failures;
            }
          }
        }
      }
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "weights sum to 1 within %.1e, %d threshold bounds checked, "
                "%d violations (including v=0 collapse)",
                worst_sum, bounds, failures);
  return Report(8, failures == 0 && worst_sum <= 1e-9, detail);
}

bool MonteCarlo() {
  VerifyOptions options;
  options.mc_trials = 100'000;
  options.seed = 7;
  const auto start = Clock::now();
  const std::vector<VerifyRow> first = RunOracleMatrix(options);
  const double elapsed = Seconds(start);
  const std::vector<VerifyRow> second = RunOracleMatrix(options);
  int consistent = 0;
  bool identical = first.size() == second.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const VerifyRow& r = first[i];
    consistent += r.mc.has_value() && McConsistent(r);
    if (r.mc && r.mc->half_width > 0.0) {
      worst = std::max(worst,
                       std::abs(r.mc->estimate - r.exact) / r.mc->half_width);
    }
    if (identical && (!second[i].mc ||
                      second[i].mc->estimate != r.mc->estimate ||
                      second[i].mc->half_width != r.mc->half_width)) {
      identical = false;
    }
  }
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "%d/%zu rows within 3 half-widths at 1e5 trials (max %.2f "
                "half-widths), reruns %s, %.2f s per run",
                consistent, first.size(), worst,
                identical ? "bit-identical" : "DIFFER", elapsed);
  return Report(9, consistent == static_cast<int>(first.size()) && identical,
                detail);
}

int Main() {
  bool ok = true;
  std::vector<CellCheck> one;
  std::vector<CellCheck> two;
  ok &= DeltaColumns(1, TableId::kOne, 5.0, &one);
  ok &= DeltaColumns(2, TableId::kTwo, 2.0, &two);
  ok &= SigmaColumns(one, two);
  QueryCounts(one, two);
  ok &= OracleDomination();
  ok &= CollapseIdentities();
  ok &= CurveProperties();
  ok &= KnownEntries();
  ok &= MonteCarlo();
  std::printf("%s\n", ok ? "acceptance: all gated criteria pass"
                         : "acceptance: FAILED");
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace spacct

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  try {
    return spacct::Main();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
}

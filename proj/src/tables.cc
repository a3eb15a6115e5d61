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


#include "spacct/tables.h"

#include <cmath>
#include <cstdlib>

#include "spacct/compose.h"
#include "spacct/errors.h"
#include "spacct/scenario.h"

namespace spacct {
namespace {

constexpr PublishedCell kTableOne[] = {
    {32, 0.005, 0.0153, 0.0225, 0, ""},   {32, 0.01, 0.0153, 0.0203, 3, ""},
    {32, 0.02, 0.0153, 0.0163, 9, ""},    {64, 0.005, 0.0219, 0.0329, 1, ""},
    {64, 0.01, 0.0219, 0.0306, 6, ""},    {64, 0.02, 0.0219, 0.0264, 20, ""},
    {128, 0.005, 0.0311, 0.0475, 3, ""},  {128, 0.01, 0.0311, 0.0452, 12, ""},
    {128, 0.02, 0.0311, 0.0409, 44, ""},  {256, 0.005, 0.0441, 0.0682, 6, ""},
    {256, 0.01, 0.0441, 0.0660, 25, ""},  {256, 0.02, 0.0441, 0.0617, 93, ""},
    {512, 0.005, 0.0624, 0.0973, 12, ""}, {512, 0.01, 0.0624, 0.0953, 50, ""},
    {512, 0.02, 0.0624, 0.0912, 194, ""},
};

constexpr PublishedCell kTableTwo[] = {
    {32, 0.05, 0.0869, 0.1214, 2, ""},
    {32, 0.1, 0.0869, 0.1020, 7, ""},
    {32, 0.2, 0.0869, 0.0711, 23, "printed as .0.0711"},
    {64, 0.05, 0.1240, 0.1808, 4, ""},
    {64, 0.1, 0.1240, 0.1644, 16, ""},
    {64, 0.2, 0.1240, 0.1291, 55, ""},
    {128, 0.05, 0.1760, 0.2618, 9, ""},
    {128, 0.1, 0.1760, 0.2496, 35, ""},
    {128, 0.2, 0.1760, 0.2232, 126, ""},
};

CompositionSpec EqualBlocks(int n, int m) {
  return CompositionSpec{TemplateFormat{std::vector<int>(m, n / m)},
                         std::vector<QueryDescriptor>(m, QueryDescriptor{})};
}

}  // namespace

TableSpec GetTableSpec(TableId id) {
  if (id == TableId::kOne) {
    return {id, "table1", 32768, 0.5, {32, 64, 128, 256, 512},
            {0.005, 0.01, 0.02}};
  }
  return {id, "table2", 1024, 0.5, {32, 64, 128}, {0.05, 0.1, 0.2}};
}

std::span<const PublishedCell> PublishedCells(TableId id) {
  if (id == TableId::kOne) return kTableOne;
  return kTableTwo;
}

std::vector<TableCell> ComputeTable(const TableSpec& spec,
                                    const DpSearchOptions& dp_options) {
  const Scenario scenario = Scenario::Iid(spec.n, spec.p);
  std::vector<TableCell> cells;
  for (int m : spec.query_counts) {
    if (m < 1 || spec.n % m != 0) {
      throw DomainError("table query count must divide n");
    }
    const CompositionSpec composition = EqualBlocks(spec.n, m);
    const double sigma = MseIncrease(spec.n, spec.n / m, spec.p).sigma_increase;
    for (double eps : spec.epsilons) {
      TableCell cell;
      cell.m = m;
      cell.epsilon = eps;
      cell.sigma = sigma;
      cell.delta_sp = NonadaptiveIid(scenario, composition, eps).total_delta;
      cell.dp = MaxDpQueries(eps, cell.delta_sp, sigma, spec.n, dp_options);
      cells.push_back(cell);
    }
  }
  return cells;
}

bool DpQueriesClose(int computed, int published) {
  const double slack = std::max(2.0, 0.5 * published);
  return std::abs(computed - published) <= slack;
}

std::vector<CellCheck> CheckTable(TableId id,
                                  std::span<const TableCell> computed) {
  std::vector<CellCheck> checks;
  for (const PublishedCell& pub : PublishedCells(id)) {
    const TableCell* match = nullptr;
    for (const TableCell& c : computed) {
      if (c.m == pub.m && std::abs(c.epsilon - pub.epsilon) < 1e-12) {
        match = &c;
        break;
      }
    }
    if (match == nullptr) {
      throw DomainError("computed table lacks a published cell");
    }
    CellCheck check;
    check.computed = *match;
    check.published = pub;
    check.delta_ok =
        std::abs(match->delta_sp - pub.delta) <= kDeltaTolerance + 1e-12;
    check.sigma_ok =
        std::abs(match->sigma - pub.sigma) <= kSigmaTolerance + 1e-12;
    check.dp_ok = DpQueriesClose(match->dp.k_max, pub.dp_queries);
    checks.push_back(check);
  }
  return checks;
}

}  // namespace spacct

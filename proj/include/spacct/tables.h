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


#ifndef SPACCT_TABLES_H_
#define SPACCT_TABLES_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spacct/baseline.h"

namespace spacct {

// Reproduction of the two SP-versus-DP comparison tables: an iid database
// of size n with occurrence probability p, m equal-block property queries,
// and a few target epsilons.

enum class TableId { kOne, kTwo };

struct TableSpec {
  TableId id;
  std::string name;
  int n;
  double p;
  std::vector<int> query_counts;
  std::vector<double> epsilons;
};

TableSpec GetTableSpec(TableId id);

// A printed cell. `delta` and `sigma` carry four printed decimals.
struct PublishedCell {
  int m;
  double epsilon;
  double sigma;
  double delta;
  int dp_queries;
  const char* note;  // nonempty for cells whose printed form is irregular
};

std::span<const PublishedCell> PublishedCells(TableId id);

struct TableCell {
  int m = 0;
  double epsilon = 0.0;
  double sigma = 0.0;
  double delta_sp = 0.0;
  DpCalibration dp;
};

// Recomputes every cell in row-major (m, epsilon) order.
std::vector<TableCell> ComputeTable(const TableSpec& spec,
                                    const DpSearchOptions& dp_options = {});

inline constexpr double kDeltaTolerance = 0.0005;
inline constexpr double kSigmaTolerance = 0.0001;

struct CellCheck {
  TableCell computed;
  PublishedCell published;
  bool delta_ok = false;
  bool sigma_ok = false;
  bool dp_ok = false;  // within max(2, 50%) of the printed count
};

std::vector<CellCheck> CheckTable(TableId id,
                                  std::span<const TableCell> computed);

bool DpQueriesClose(int computed, int published);

}  // namespace spacct

#endif  // SPACCT_TABLES_H_

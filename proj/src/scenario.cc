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

#include "spacct/scenario.h"

#include <string>
#include <utility>

#include "spacct/errors.h"

namespace spacct {

Scenario Scenario::Iid(int n, double p, int critical_index) {
  return IidAttributes(n, {p}, critical_index);
}

Scenario Scenario::IidAttributes(int n, std::vector<double> attribute_p,
                                 int critical_index) {
  Scenario s;
  s.model_ = EntryModel::kIid;
  s.n_ = n;
  s.critical_index_ = critical_index;
  s.attributes_ = static_cast<int>(attribute_p.size());
  s.p_.push_back(std::move(attribute_p));
  s.Validate();
  return s;
}

Scenario Scenario::Explicit(const std::vector<double>& p, int critical_index) {
  std::vector<std::vector<double>> rows;
  rows.reserve(p.size());
  for (double x : p) rows.push_back({x});
  return ExplicitAttributes(std::move(rows), critical_index);
}

Scenario Scenario::ExplicitAttributes(std::vector<std::vector<double>> p,
                                      int critical_index) {
  Scenario s;
  s.model_ = EntryModel::kExplicit;
  s.n_ = static_cast<int>(p.size());
  s.critical_index_ = critical_index;
  s.attributes_ = p.empty() ? 0 : static_cast<int>(p.front().size());
  s.p_ = std::move(p);
  s.Validate();
  return s;
}

Scenario Scenario::Known(int n, double p, int known, int known_positive,
                         int critical_index) {
  Scenario s;
  s.model_ = EntryModel::kKnown;
  s.n_ = n;
  s.critical_index_ = critical_index;
  s.attributes_ = 1;
  s.known_ = known;
  s.known_positive_ = known_positive;
  s.p_.push_back({p});
  s.Validate();
  return s;
}

void Scenario::Validate() const {
  if (n_ < 1) throw DomainError("scenario: n must be >= 1");
  if (critical_index_ < 1 || critical_index_ > n_) {
    throw DomainError("scenario: critical index must lie in [1, n]");
  }
  if (attributes_ < 1 || attributes_ > kMaxAttributes) {
    throw DomainError("scenario: attribute count must lie in [1, " +
                      std::to_string(kMaxAttributes) + "]");
  }
  for (const auto& row : p_) {
    if (static_cast<int>(row.size()) != attributes_) {
      throw DomainError("scenario: ragged attribute probabilities");
    }
    for (double x : row) {
      if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("scenario: probability outside [0,1]");
      }
    }
  }
  if (model_ == EntryModel::kKnown) {
    if (known_ < 0 || known_ > n_ - 1) {
      throw DomainError("scenario: known entries must lie in [0, n-1]");
    }
    if (known_positive_ < 0 || known_positive_ > known_) {
      throw DomainError("scenario: known positives must lie in [0, known]");
    }
  }
}

double Scenario::probability(int index, int attribute) const {
  if (index < 1 || index > n_ || attribute < 0 || attribute >= attributes_) {
    throw DomainError("scenario: entry or attribute out of range");
  }
  switch (model_) {
    case EntryModel::kIid:
      return p_[0][static_cast<std::size_t>(attribute)];
    case EntryModel::kExplicit:
      return p_[static_cast<std::size_t>(index - 1)]
               [static_cast<std::size_t>(attribute)];
    case EntryModel::kKnown: {
      if (index == critical_index_) return p_[0][0];
      // Rank among non-critical indices, 0-based.
      const int rank = index < critical_index_ ? index - 1 : index - 2;
      if (rank < known_positive_) return 1.0;
      if (rank < known_) return 0.0;
      return p_[0][0];
    }
  }
  return 0.0;
}

double Scenario::iid_probability(int attribute) const {
  if (model_ == EntryModel::kExplicit) {
    throw DomainError("scenario: entries are not identically distributed");
  }
  if (attribute < 0 || attribute >= attributes_) {
    throw DomainError("scenario: attribute out of range");
  }
  return p_[0][static_cast<std::size_t>(attribute)];
}

Scenario Scenario::ToExplicit() const {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) {
    for (int a = 0; a < attributes_; ++a) {
      rows[static_cast<std::size_t>(i - 1)].push_back(probability(i, a));
    }
  }
  return ExplicitAttributes(std::move(rows), critical_index_);
}

Scenario Scenario::WithCriticalIndex(int critical_index) const {
  Scenario s = *this;
  s.critical_index_ = critical_index;
  s.Validate();
  return s;
}

}  // namespace spacct

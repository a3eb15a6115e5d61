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

#ifndef SPACCT_SCENARIO_H_
#define SPACCT_SCENARIO_H_

#include <vector>

namespace spacct {

// How the n database entries are distributed. Every entry is a vector of
// independent Bernoulli attributes; a value of the entry is encoded as a
// bitmask over attributes, so the value space W is {0, ..., 2^A - 1}.
enum class EntryModel {
  kIid,       // every entry has the same attribute probabilities
  kExplicit,  // per-entry attribute probabilities
  kKnown,     // iid Bernoulli(p), single attribute, with v entries known to
              // the adversary (v_plus of them positive)
};

class Scenario {
 public:
  static constexpr int kMaxAttributes = 8;

  static Scenario Iid(int n, double p, int critical_index = 1);
  static Scenario IidAttributes(int n, std::vector<double> attribute_p,
                                int critical_index = 1);
  static Scenario Explicit(const std::vector<double>& p,
                           int critical_index = 1);
  static Scenario ExplicitAttributes(std::vector<std::vector<double>> p,
                                     int critical_index = 1);
  // The known entries are taken to be the first `known` non-critical
  // indices, the first `known_positive` of them with value 1. Their
  // placement does not influence any of the accounting formulas.
  static Scenario Known(int n, double p, int known, int known_positive,
                        int critical_index = 1);

  int n() const { return n_; }
  int critical_index() const { return critical_index_; }
  int attributes() const { return attributes_; }
  EntryModel model() const { return model_; }
  bool iid() const { return model_ == EntryModel::kIid; }

  int known() const { return known_; }
  int known_positive() const { return known_positive_; }

  // Number of values in W (2^attributes).
  int value_count() const { return 1 << attributes_; }

  // P(attribute `attribute` of entry `index` is 1); index is 1-based.
  double probability(int index, int attribute) const;

  // Shared attribute probability; DomainError unless the model is kIid or
  // kKnown (for kKnown this is the probability of the unknown entries).
  double iid_probability(int attribute = 0) const;

  // Same law with every entry listed explicitly (known entries become point
  // masses).
  Scenario ToExplicit() const;

  // Copy with a different critical index.
  Scenario WithCriticalIndex(int critical_index) const;

 private:
  Scenario() = default;
  void Validate() const;

  EntryModel model_ = EntryModel::kIid;
  int n_ = 0;
  int critical_index_ = 1;
  int attributes_ = 1;
  int known_ = 0;
  int known_positive_ = 0;
  // Row-major [entry][attribute]; one row for kIid and kKnown.
  std::vector<std::vector<double>> p_;
};

}  // namespace spacct

#endif  // SPACCT_SCENARIO_H_

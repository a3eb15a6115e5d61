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

#ifndef SPACCT_QUERY_H_
#define SPACCT_QUERY_H_

#include <span>

#include "spacct/curve.h"
#include "spacct/pmf.h"
#include "spacct/scenario.h"

namespace spacct {

// Which query is asked of a block. Only property (count) queries ship; each
// descriptor names the attribute that is counted.
struct QueryDescriptor {
  int attribute = 0;

  friend bool operator==(const QueryDescriptor&, const QueryDescriptor&) =
      default;
};

// Maps a block of entries to the law of the released answer. A noise
// mechanism would plug in here by convolving its kernel into these laws.
class QueryKernel {
 public:
  virtual ~QueryKernel() = default;

  // Answers lie in [0, MaxAnswer(block_size)].
  virtual int MaxAnswer(int block_size) const = 0;

  // Law of the answer when no entry of `block` is conditioned.
  virtual Pmf AnswerLaw(const Scenario& scenario,
                        std::span<const int> block) const = 0;

  // Law of the answer when `block` contains the scenario's critical index
  // and that entry is fixed to `critical_value`.
  virtual Pmf ConditionalAnswerLaw(const Scenario& scenario,
                                   std::span<const int> block,
                                   int critical_value) const = 0;

  // Deterministic answer on a realized database; values are indexed by
  // 1-based entry index (values[0] unused).
  virtual int Evaluate(std::span<const int> block,
                       std::span<const int> values) const = 0;

  // Conditional laws over every value of W for a block holding the critical
  // entry.
  ConditionalLaws CriticalLaws(const Scenario& scenario,
                               std::span<const int> block) const;
};

// Count of block entries whose `attribute` bit is set.
class PropertyQuery final : public QueryKernel {
 public:
  explicit PropertyQuery(int attribute = 0) : attribute_(attribute) {}
  explicit PropertyQuery(const QueryDescriptor& d) : attribute_(d.attribute) {}

  int attribute() const { return attribute_; }

  int MaxAnswer(int block_size) const override { return block_size; }
  Pmf AnswerLaw(const Scenario& scenario,
                std::span<const int> block) const override;
  Pmf ConditionalAnswerLaw(const Scenario& scenario, std::span<const int> block,
                           int critical_value) const override;
  int Evaluate(std::span<const int> block,
               std::span<const int> values) const override;

 private:
  int attribute_;
};

}  // namespace spacct

#endif  // SPACCT_QUERY_H_

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

#ifndef SPACCT_PARTITION_H_
#define SPACCT_PARTITION_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "spacct/rng.h"

namespace spacct {

// Database indices and block numbers are 1-based throughout the public API.

// Block sizes (n_1, ..., n_m) of a template.
struct TemplateFormat {
  std::vector<int> sizes;

  int blocks() const { return static_cast<int>(sizes.size()); }
  int total() const;
};

// Throws DomainError unless every size is >= 1, there is at least one block,
// and the sizes sum to at most `n`.
void ValidateFormat(const TemplateFormat& format, int n);

// Index lists, one per block. Within-block order is kept so a non-symmetric
// query kernel could use it; enumeration lists each block in ascending order.
struct Template {
  std::vector<std::vector<int>> blocks;

  TemplateFormat format() const;
  // Block (1-based) holding `index`, or 0 when unassigned.
  int BlockOf(int index) const;

  friend bool operator==(const Template&, const Template&) = default;
};

// True when every index lies in [1, n] and occurs at most once overall.
bool IsInjective(const Template& t, int n);

// Condition "critical index j lands in block k".
struct Restriction {
  int critical_index;
  int block;
};

// Uniform law over the injective templates of a format, optionally
// conditioned on a Restriction. Blocks are treated as index sets.
class PartitionLaw {
 public:
  PartitionLaw(int n, TemplateFormat format,
               std::optional<Restriction> restriction = std::nullopt);

  int n() const { return n_; }
  const TemplateFormat& format() const { return format_; }
  const std::optional<Restriction>& restriction() const {
    return restriction_;
  }

  PartitionLaw Restricted(int critical_index, int block) const;

 private:
  int n_;
  TemplateFormat format_;
  std::optional<Restriction> restriction_;
};

inline constexpr std::uint64_t kDefaultTemplateCap = 1'000'000;

// n_k / n. Throws DomainError for restricted laws or k out of range.
double MembershipProbability(const PartitionLaw& law, int index, int block);

// Number of templates in the support of `law` (within-block order
// quotiented out). Saturates at UINT64_MAX.
std::uint64_t TemplateCount(const PartitionLaw& law);

struct WeightedTemplate {
  Template tmpl;
  double weight;
};

// All templates with their (uniform) probabilities. Throws CapacityError
// when TemplateCount(law) > cap.
std::vector<WeightedTemplate> EnumerateTemplates(
    const PartitionLaw& law, std::uint64_t cap = kDefaultTemplateCap);

// Uniform draw: partial Fisher-Yates shuffle, then block slicing. Restricted
// laws seat the critical index in its block first.
Template SampleTemplate(const PartitionLaw& law, SplitMix64& rng);
Template SampleTemplate(const PartitionLaw& law, std::uint64_t seed);

}  // namespace spacct

#endif  // SPACCT_PARTITION_H_

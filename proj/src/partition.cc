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

#include "spacct/partition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "spacct/errors.h"

namespace spacct {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// Exact C(n, k), saturating.
std::uint64_t Choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (acc > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

// Appends every ascending k-subset of `pool` to `out`, each prefixed by
// `forced` when present.
void Combinations(const std::vector<int>& pool, int k,
                  std::optional<int> forced,
                  std::vector<std::vector<int>>& out) {
  const int size = static_cast<int>(pool.size());
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    std::vector<int> block;
    block.reserve(static_cast<std::size_t>(k) + (forced ? 1 : 0));
    for (int i : pick) block.push_back(pool[static_cast<std::size_t>(i)]);
    if (forced) {
      block.insert(std::upper_bound(block.begin(), block.end(), *forced),
                   *forced);
    }
    out.push_back(std::move(block));
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == size - k + i) --i;
    if (i < 0) return;
    ++pick[static_cast<std::size_t>(i)];
    for (int r = i + 1; r < k; ++r) {
      pick[static_cast<std::size_t>(r)] = pick[static_cast<std::size_t>(r - 1)] + 1;
    }
  }
}

void EnumerateFrom(const PartitionLaw& law, std::size_t block,
                   std::vector<bool>& used, Template& current,
                   std::vector<Template>& out) {
  const auto& sizes = law.format().sizes;
  if (block == sizes.size()) {
    out.push_back(current);
    return;
  }
  const auto& restriction = law.restriction();
  const int block_number = static_cast<int>(block) + 1;
  std::optional<int> forced;
  if (restriction && restriction->block == block_number) {
    forced = restriction->critical_index;
  }
  std::vector<int> pool;
  for (int i = 1; i <= law.n(); ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    if (restriction && i == restriction->critical_index) continue;
    pool.push_back(i);
  }
  const int take = sizes[block] - (forced ? 1 : 0);
  if (take > static_cast<int>(pool.size())) return;
  std::vector<std::vector<int>> choices;
  Combinations(pool, take, forced, choices);
  for (auto& choice : choices) {
    for (int i : choice) used[static_cast<std::size_t>(i)] = true;
    current.blocks.push_back(std::move(choice));
    EnumerateFrom(law, block + 1, used, current, out);
    for (int i : current.blocks.back()) used[static_cast<std::size_t>(i)] = false;
    current.blocks.pop_back();
  }
}

}  // namespace

int TemplateFormat::total() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0);
}

void ValidateFormat(const TemplateFormat& format, int n) {
  if (format.sizes.empty()) throw DomainError("format: no blocks");
  for (int s : format.sizes) {
    if (s < 1) throw DomainError("format: block sizes must be >= 1");
  }
  if (format.total() > n) {
    throw DomainError("format: block sizes sum to " +
                      std::to_string(format.total()) + " > n = " +
                      std::to_string(n));
  }
}

TemplateFormat Template::format() const {
  TemplateFormat f;
  for (const auto& b : blocks) f.sizes.push_back(static_cast<int>(b.size()));
  return f;
}

int Template::BlockOf(int index) const {
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (std::find(blocks[k].begin(), blocks[k].end(), index) != blocks[k].end()) {
      return static_cast<int>(k) + 1;
    }
  }
  return 0;
}

bool IsInjective(const Template& t, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (const auto& block : t.blocks) {
    for (int i : block) {
      if (i < 1 || i > n || seen[static_cast<std::size_t>(i)]) return false;
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
  return true;
}

PartitionLaw::PartitionLaw(int n, TemplateFormat format,
                           std::optional<Restriction> restriction)
    : n_(n), format_(std::move(format)), restriction_(restriction) {
  if (n < 1) throw DomainError("PartitionLaw: n must be >= 1");
  ValidateFormat(format_, n_);
  if (restriction_) {
    if (restriction_->critical_index < 1 || restriction_->critical_index > n_) {
      throw DomainError("PartitionLaw: critical index out of range");
    }
    if (restriction_->block < 1 || restriction_->block > format_.blocks()) {
      throw DomainError("PartitionLaw: block out of range");
    }
  }
}

PartitionLaw PartitionLaw::Restricted(int critical_index, int block) const {
  return PartitionLaw(n_, format_, Restriction{critical_index, block});
}

double MembershipProbability(const PartitionLaw& law, int index, int block) {
  if (law.restriction()) {
    throw DomainError("MembershipProbability: law is already restricted");
  }
  if (index < 1 || index > law.n()) {
    throw DomainError("MembershipProbability: index out of range");
  }
  if (block < 1 || block > law.format().blocks()) {
    throw DomainError("MembershipProbability: block out of range");
  }
  return static_cast<double>(law.format().sizes[static_cast<std::size_t>(block - 1)]) /
         static_cast<double>(law.n());
}

std::uint64_t TemplateCount(const PartitionLaw& law) {
  const auto& sizes = law.format().sizes;
  const auto& r = law.restriction();
  int remaining = r ? law.n() - 1 : law.n();
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const bool holds_critical = r && r->block == static_cast<int>(k) + 1;
    const int take = sizes[k] - (holds_critical ? 1 : 0);
    count = SaturatingMul(count, Choose(remaining, take));
    remaining -= take;
  }
  return count;
}

std::vector<WeightedTemplate> EnumerateTemplates(const PartitionLaw& law,
                                                 std::uint64_t cap) {
  const std::uint64_t count = TemplateCount(law);
  if (count > cap) {
    throw CapacityError("template enumeration needs " +
                            std::to_string(count) +
                            " templates; use Monte-Carlo mode",
                        cap);
  }
  std::vector<bool> used(static_cast<std::size_t>(law.n()) + 1, false);
  Template current;
  std::vector<Template> templates;
  templates.reserve(static_cast<std::size_t>(count));
  EnumerateFrom(law, 0, used, current, templates);
  const double weight = 1.0 / static_cast<double>(templates.size());
  std::vector<WeightedTemplate> out;
  out.reserve(templates.size());
  for (auto& t : templates) out.push_back({std::move(t), weight});
  return out;
}

Template SampleTemplate(const PartitionLaw& law, SplitMix64& rng) {
  const auto& sizes = law.format().sizes;
  const auto& r = law.restriction();
  std::vector<int> pool;
  pool.reserve(static_cast<std::size_t>(law.n()));
  for (int i = 1; i <= law.n(); ++i) {
    if (!r || i != r->critical_index) pool.push_back(i);
  }
  // Only the first `needed` slots of the shuffle are consumed.
  const std::size_t needed =
      static_cast<std::size_t>(law.format().total() - (r ? 1 : 0));
  for (std::size_t i = 0; i < needed; ++i) {
    const std::size_t pick =
        i + static_cast<std::size_t>(UniformBelow(rng, pool.size() - i));
    std::swap(pool[i], pool[pick]);
  }
  Template t;
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    std::vector<int> block;
    int take = sizes[k];
    if (r && r->block == static_cast<int>(k) + 1) {
      block.push_back(r->critical_index);
      --take;
    }
    for (int c = 0; c < take; ++c) block.push_back(pool[cursor++]);
    t.blocks.push_back(std::move(block));
  }
  return t;
}

Template SampleTemplate(const PartitionLaw& law, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return SampleTemplate(law, rng);
}

}  // namespace spacct

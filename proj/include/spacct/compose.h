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

#ifndef SPACCT_COMPOSE_H_
#define SPACCT_COMPOSE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spacct/partition.h"
#include "spacct/query.h"
#include "spacct/scenario.h"
#include "spacct/spc.h"

namespace spacct {

// Decision tree for adaptive compositions. Node 0 is the root and asks the
// first query; the answer to a node's query selects the first branch whose
// `below` bound exceeds it (an absent bound matches everything) and that
// branch's child asks the next query. Every root-to-leaf path must have
// exactly m nodes.
class AdaptiveTree {
 public:
  struct Branch {
    std::optional<int> below;
    int child;
  };

  struct Node {
    QueryDescriptor query;
    std::vector<Branch> branches;
  };

  // Creates the root.
  explicit AdaptiveTree(QueryDescriptor root);

  // Returns the id of the new node.
  int AddChild(int parent, std::optional<int> below, QueryDescriptor query);

  // The same query sequence on every path.
  static AdaptiveTree Chain(std::span<const QueryDescriptor> queries);

  // Two queries: `first`, then `if_at_least` when the first answer is
  // >= threshold and `otherwise` below it.
  static AdaptiveTree ThresholdSwitch(QueryDescriptor first, int threshold,
                                      QueryDescriptor if_at_least,
                                      QueryDescriptor otherwise);

  const std::vector<Node>& nodes() const { return nodes_; }

  // Query asked after observing `prefix` (the answers so far).
  QueryDescriptor Select(std::span<const int> prefix) const;

  // DomainError unless every path has exactly `depth` nodes and every inner
  // node ends with an unbounded branch.
  void ValidateDepth(int depth) const;

  // Largest attribute index referenced by any node.
  int MaxAttribute() const;

 private:
  std::vector<Node> nodes_;
};

struct CompositionSpec {
  TemplateFormat format;
  std::variant<std::vector<QueryDescriptor>, AdaptiveTree> queries;

  bool adaptive() const {
    return std::holds_alternative<AdaptiveTree>(queries);
  }
  // Query for block k (1-based) after observing `prefix` (size k - 1).
  QueryDescriptor QueryFor(int block, std::span<const int> prefix) const;

  // Checks the format against the scenario and the queries against the
  // format and the scenario's attributes.
  void Validate(const Scenario& scenario) const;
};

enum class CompositionMode {
  kNonadaptiveIid,
  kNonadaptiveGeneral,
  kAdaptiveIid,
  kAdaptiveGeneral,
};

std::string ModeName(CompositionMode mode);

struct BlockTerm {
  int block;      // 1-based
  double weight;  // n_k / n
  double term;    // D-hat (or SPC) term for the block
};

struct CompositionReport {
  double epsilon = 0.0;
  std::vector<BlockTerm> per_block;
  // sum_k weight * term before clamping to [0, 1].
  double unclamped_delta = 0.0;
  double total_delta = 0.0;
  CompositionMode mode = CompositionMode::kNonadaptiveIid;
  // Set only for Monte-Carlo evaluation.
  std::optional<double> half_width;
  // Set only with PairMaximization::kOverall: the pair (v, w) attaining the
  // maximum.
  std::optional<std::pair<int, int>> critical_pair;
};

inline constexpr std::uint64_t kDefaultPrefixCap = 100'000;

// Where the adaptive bounds maximize over critical-value pairs (v, w).
enum class PairMaximization {
  kPerTerm,  // D-hat inside every template and prefix term
  kOverall,  // one pair for the whole sum; never larger than kPerTerm
};

struct ComposeOptions {
  EvaluationMode mode = Enumerate{};
  std::uint64_t prefix_cap = kDefaultPrefixCap;
  PairMaximization pair_max = PairMaximization::kPerTerm;
};

// sum_k (n_k/n) D-hat of F_k at database size n_k.
CompositionReport NonadaptiveIid(const Scenario& scenario,
                                 const CompositionSpec& spec, double epsilon);

// sum_k (n_k/n) SPC of F_k under the partition law restricted to j -> k.
// Known-entry scenarios use the exact known-entries mixture over the n - 1
// non-critical entries and ignore `mode`.
CompositionReport NonadaptiveGeneral(const Scenario& scenario,
                                     const CompositionSpec& spec,
                                     double epsilon,
                                     const EvaluationMode& mode = Enumerate{});

// sum_k (n_k/n) E_prefix[D-hat of F_k(prefix) at size n_k], the prefix
// drawn from the unconditioned answer laws of the earlier blocks.
CompositionReport AdaptiveIid(
    const Scenario& scenario, const CompositionSpec& spec, double epsilon,
    std::uint64_t prefix_cap = kDefaultPrefixCap,
    PairMaximization pair_max = PairMaximization::kPerTerm);

// As AdaptiveIid with an additional expectation over templates in which
// the critical index lands in block k.
CompositionReport AdaptiveGeneral(
    const Scenario& scenario, const CompositionSpec& spec, double epsilon,
    std::uint64_t template_cap = kDefaultTemplateCap,
    std::uint64_t prefix_cap = kDefaultPrefixCap,
    PairMaximization pair_max = PairMaximization::kPerTerm);

// Picks the mode from the scenario model and the spec kind.
CompositionReport Compose(const Scenario& scenario,
                          const CompositionSpec& spec, double epsilon,
                          const ComposeOptions& options = {});

}  // namespace spacct

#endif  // SPACCT_COMPOSE_H_

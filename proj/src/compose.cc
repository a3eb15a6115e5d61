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

#include "spacct/compose.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <utility>

#include "spacct/curve.h"
#include "spacct/errors.h"
#include "spacct/numerics.h"

namespace spacct {

AdaptiveTree::AdaptiveTree(QueryDescriptor root) {
  nodes_.push_back({root, {}});
}

int AdaptiveTree::AddChild(int parent, std::optional<int> below,
                           QueryDescriptor query) {
  if (parent < 0 || parent >= static_cast<int>(nodes_.size())) {
    throw DomainError("AdaptiveTree: unknown parent node");
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({query, {}});
  nodes_[static_cast<std::size_t>(parent)].branches.push_back({below, id});
  return id;
}

AdaptiveTree AdaptiveTree::Chain(std::span<const QueryDescriptor> queries) {
  if (queries.empty()) throw DomainError("AdaptiveTree: empty chain");
  AdaptiveTree tree(queries.front());
  int node = 0;
  for (std::size_t i = 1; i < queries.size(); ++i) {
    node = tree.AddChild(node, std::nullopt, queries[i]);
  }
  return tree;
}

AdaptiveTree AdaptiveTree::ThresholdSwitch(QueryDescriptor first,
                                           int threshold,
                                           QueryDescriptor if_at_least,
                                           QueryDescriptor otherwise) {
  AdaptiveTree tree(first);
  tree.AddChild(0, threshold, otherwise);
  tree.AddChild(0, std::nullopt, if_at_least);
  return tree;
}

QueryDescriptor AdaptiveTree::Select(std::span<const int> prefix) const {
  int node = 0;
  for (int answer : prefix) {
    const auto& branches = nodes_[static_cast<std::size_t>(node)].branches;
    auto it = std::find_if(branches.begin(), branches.end(),
                           [answer](const Branch& b) {
                             return !b.below || answer < *b.below;
                           });
    if (it == branches.end()) {
      throw DomainError("AdaptiveTree: no branch matches answer " +
                        std::to_string(answer));
    }
    node = it->child;
  }
  return nodes_[static_cast<std::size_t>(node)].query;
}

void AdaptiveTree::ValidateDepth(int depth) const {
  std::function<void(int, int)> visit = [&](int node, int level) {
    const auto& branches = nodes_[static_cast<std::size_t>(node)].branches;
    if (level == depth) {
      if (!branches.empty()) {
        throw DomainError("AdaptiveTree: deeper than the number of blocks");
      }
      return;
    }
    if (branches.empty() || branches.back().below) {
      throw DomainError(
          "AdaptiveTree: inner node needs a final unbounded branch");
    }
    for (const Branch& b : branches) visit(b.child, level + 1);
  };
  visit(0, 1);
}

int AdaptiveTree::MaxAttribute() const {
  int best = 0;
  for (const Node& n : nodes_) best = std::max(best, n.query.attribute);
  return best;
}

QueryDescriptor CompositionSpec::QueryFor(int block,
                                          std::span<const int> prefix) const {
  if (const auto* list = std::get_if<std::vector<QueryDescriptor>>(&queries)) {
    return (*list)[static_cast<std::size_t>(block - 1)];
  }
  return std::get<AdaptiveTree>(queries).Select(prefix);
}

void CompositionSpec::Validate(const Scenario& scenario) const {
  ValidateFormat(format, scenario.n());
  int max_attribute = 0;
  if (const auto* list = std::get_if<std::vector<QueryDescriptor>>(&queries)) {
    if (static_cast<int>(list->size()) != format.blocks()) {
      throw DomainError("composition: need exactly one query per block");
    }
    for (const auto& q : *list) {
      if (q.attribute < 0) throw DomainError("composition: negative attribute");
      max_attribute = std::max(max_attribute, q.attribute);
    }
  } else {
    const auto& tree = std::get<AdaptiveTree>(queries);
    tree.ValidateDepth(format.blocks());
    for (const auto& node : tree.nodes()) {
      if (node.query.attribute < 0) {
        throw DomainError("composition: negative attribute");
      }
    }
    max_attribute = tree.MaxAttribute();
  }
  if (max_attribute >= scenario.attributes()) {
    throw DomainError("composition: query references attribute " +
                      std::to_string(max_attribute) +
                      " but the scenario has " +
                      std::to_string(scenario.attributes()));
  }
}

std::string ModeName(CompositionMode mode) {
  switch (mode) {
    case CompositionMode::kNonadaptiveIid:
      return "nonadaptive-iid";
    case CompositionMode::kNonadaptiveGeneral:
      return "nonadaptive-general";
    case CompositionMode::kAdaptiveIid:
      return "adaptive-iid";
    case CompositionMode::kAdaptiveGeneral:
      return "adaptive-general";
  }
  return "unknown";
}

namespace {

double Weight(const CompositionSpec& spec, int n, int block) {
  return static_cast<double>(spec.format.sizes[static_cast<std::size_t>(block - 1)]) /
         static_cast<double>(n);
}

void Finish(CompositionReport& report) {
  // Fixed block order keeps the reduction deterministic.
  double total = 0.0;
  for (const BlockTerm& t : report.per_block) total += t.weight * t.term;
  report.unclamped_delta = total;
  report.total_delta = std::clamp(total, 0.0, 1.0);
}

void RequireNonadaptive(const CompositionSpec& spec) {
  if (spec.adaptive()) {
    throw DomainError("nonadaptive composition given an adaptive spec");
  }
}

std::uint64_t PrefixCount(const CompositionSpec& spec, int block) {
  std::uint64_t count = 1;
  for (int l = 1; l < block; ++l) {
    const auto radix =
        static_cast<std::uint64_t>(spec.format.sizes[static_cast<std::size_t>(l - 1)]) + 1;
    if (count > std::numeric_limits<std::uint64_t>::max() / radix) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= radix;
  }
  return count;
}

// Directional divergences of the critical block's answer law for one query:
// up = D(law | bit 1, law | bit 0), down = D(law | bit 0, law | bit 1).
struct Directional {
  double up;
  double down;
};

// Shared core of both adaptive modes. `unconditioned(tmpl, l, attribute)`
// returns the answer law of block l, `directional(tmpl, k, attribute)` the
// two divergences for the critical block. Templates are given with their
// weights; the iid mode passes a single placeholder.
template <typename Unconditioned, typename DirectionalFn>
CompositionReport AdaptiveCore(
    const Scenario& scenario, const CompositionSpec& spec, double epsilon,
    std::uint64_t prefix_cap, PairMaximization pair_max,
    const std::function<std::vector<WeightedTemplate>(int)>& templates_for,
    Unconditioned unconditioned, DirectionalFn directional,
    CompositionMode mode) {
  const int m = spec.format.blocks();
  const int values = scenario.value_count();
  std::vector<std::pair<int, int>> pairs;
  for (int v = 0; v < values; ++v) {
    for (int w = 0; w < values; ++w) {
      if (v != w) pairs.emplace_back(v, w);
    }
  }
  // sums[pair][k - 1]
  std::vector<std::vector<CompensatedSum>> sums(
      pairs.size(), std::vector<CompensatedSum>(static_cast<std::size_t>(m)));
  // D-hat per template and prefix, for PairMaximization::kPerTerm.
  std::vector<CompensatedSum> per_term(static_cast<std::size_t>(m));

  for (int k = 1; k <= m; ++k) {
    const std::uint64_t prefixes = PrefixCount(spec, k);
    if (prefixes > prefix_cap) {
      throw CapacityError("adaptive composition needs " +
                              std::to_string(prefixes) +
                              " answer prefixes for block " +
                              std::to_string(k),
                          prefix_cap);
    }
    for (const auto& [tmpl, tmpl_weight] : templates_for(k)) {
      std::vector<int> prefix;
      std::function<void(int, double)> walk = [&](int l, double prob) {
        const QueryDescriptor q = spec.QueryFor(l, prefix);
        if (l == k) {
          const Directional d = directional(tmpl, k, q.attribute);
          const double scale = tmpl_weight * prob;
          per_term[static_cast<std::size_t>(k - 1)].Add(
              scale * std::max(d.up, d.down));
          for (std::size_t i = 0; i < pairs.size(); ++i) {
            const int bv = (pairs[i].first >> q.attribute) & 1;
            const int bw = (pairs[i].second >> q.attribute) & 1;
            if (bv == bw) continue;
            sums[i][static_cast<std::size_t>(k - 1)].Add(
                scale * (bv == 1 ? d.up : d.down));
          }
          return;
        }
        const Pmf& law = unconditioned(tmpl, l, q.attribute);
        for (int a = law.min_support(); a <= law.max_support(); ++a) {
          const double mass = law.mass(a);
          if (mass == 0.0) continue;
          prefix.push_back(a);
          walk(l + 1, prob * mass);
          prefix.pop_back();
        }
      };
      walk(1, 1.0);
    }
  }

  CompositionReport report;
  report.epsilon = epsilon;
  report.mode = mode;
  if (pair_max == PairMaximization::kPerTerm) {
    for (int k = 1; k <= m; ++k) {
      report.per_block.push_back(
          {k, Weight(spec, scenario.n(), k),
           per_term[static_cast<std::size_t>(k - 1)].Result()});
    }
    Finish(report);
    return report;
  }

  std::size_t best = 0;
  double best_total = -1.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double total = 0.0;
    for (int k = 1; k <= m; ++k) {
      total += Weight(spec, scenario.n(), k) *
               sums[i][static_cast<std::size_t>(k - 1)].Result();
    }
    if (total > best_total) {
      best_total = total;
      best = i;
    }
  }

  report.critical_pair = pairs[best];
  for (int k = 1; k <= m; ++k) {
    report.per_block.push_back({k, Weight(spec, scenario.n(), k),
                                sums[best][static_cast<std::size_t>(k - 1)].Result()});
  }
  Finish(report);
  return report;
}

}  // namespace

CompositionReport NonadaptiveIid(const Scenario& scenario,
                                 const CompositionSpec& spec, double epsilon) {
  RequireNonadaptive(spec);
  if (!scenario.iid()) throw DomainError("NonadaptiveIid: scenario is not iid");
  spec.Validate(scenario);
  CompositionReport report;
  report.epsilon = epsilon;
  report.mode = CompositionMode::kNonadaptiveIid;
  std::map<std::pair<int, int>, double> cache;
  for (int k = 1; k <= spec.format.blocks(); ++k) {
    const int size = spec.format.sizes[static_cast<std::size_t>(k - 1)];
    const int attribute = spec.QueryFor(k, {}).attribute;
    auto [it, fresh] = cache.try_emplace({size, attribute}, 0.0);
    if (fresh) {
      it->second = DHat(
          PropertyQueryLaws(size, scenario.iid_probability(attribute)), epsilon);
    }
    report.per_block.push_back({k, Weight(spec, scenario.n(), k), it->second});
  }
  Finish(report);
  return report;
}

CompositionReport NonadaptiveGeneral(const Scenario& scenario,
                                     const CompositionSpec& spec,
                                     double epsilon,
                                     const EvaluationMode& mode) {
  RequireNonadaptive(spec);
  spec.Validate(scenario);
  const PartitionLaw law(scenario.n(), spec.format);
  CompositionReport report;
  report.epsilon = epsilon;
  report.mode = CompositionMode::kNonadaptiveGeneral;
  double variance = 0.0;
  if (scenario.model() == EntryModel::kKnown) {
    // The other slots of the critical entry's block are a uniform subset of
    // the n - 1 non-critical entries, so the known-entries mixture over that
    // population is the exact block term.
    for (int k = 1; k <= spec.format.blocks(); ++k) {
      const int size = spec.format.sizes[static_cast<std::size_t>(k - 1)];
      report.per_block.push_back(
          {k, Weight(spec, scenario.n(), k),
           SpcKnownEntries(scenario, size, epsilon,
                           KnownPopulation::kNonCritical)});
    }
    Finish(report);
    return report;
  }
  for (int k = 1; k <= spec.format.blocks(); ++k) {
    EvaluationMode block_mode = mode;
    if (auto* mc = std::get_if<MonteCarlo>(&block_mode)) {
      mc->seed = DeriveSeed(mc->seed, static_cast<std::uint64_t>(k));
    }
    const PropertyQuery kernel(spec.QueryFor(k, {}));
    const Estimate e =
        SpcGeneral(scenario, law.Restricted(scenario.critical_index(), k),
                   kernel, epsilon, block_mode);
    const double w = Weight(spec, scenario.n(), k);
    report.per_block.push_back({k, w, e.value});
    if (e.half_width) variance += (w * *e.half_width) * (w * *e.half_width);
  }
  if (std::holds_alternative<MonteCarlo>(mode)) {
    report.half_width = std::sqrt(variance);
  }
  Finish(report);
  return report;
}

CompositionReport AdaptiveIid(const Scenario& scenario,
                              const CompositionSpec& spec, double epsilon,
                              std::uint64_t prefix_cap,
                              PairMaximization pair_max) {
  if (!scenario.iid()) throw DomainError("AdaptiveIid: scenario is not iid");
  spec.Validate(scenario);
  std::map<std::pair<int, int>, Pmf> unconditioned_cache;
  std::map<std::pair<int, int>, Directional> directional_cache;
  const std::vector<WeightedTemplate> placeholder{{Template{}, 1.0}};
  return AdaptiveCore(
      scenario, spec, epsilon, prefix_cap, pair_max,
      [&](int) { return placeholder; },
      [&](const Template&, int l, int attribute) -> const Pmf& {
        const int size = spec.format.sizes[static_cast<std::size_t>(l - 1)];
        auto it = unconditioned_cache.find({size, attribute});
        if (it == unconditioned_cache.end()) {
          it = unconditioned_cache
                   .emplace(std::pair{size, attribute},
                            Binomial(size, scenario.iid_probability(attribute)))
                   .first;
        }
        return it->second;
      },
      [&](const Template&, int k, int attribute) {
        const int size = spec.format.sizes[static_cast<std::size_t>(k - 1)];
        auto it = directional_cache.find({size, attribute});
        if (it == directional_cache.end()) {
          const double p = scenario.iid_probability(attribute);
          const Pmf one = PropertyQueryAnswerLaw(size, p, 1);
          const Pmf zero = PropertyQueryAnswerLaw(size, p, 0);
          it = directional_cache
                   .emplace(std::pair{size, attribute},
                            Directional{HockeyStick(one, zero, epsilon),
                                        HockeyStick(zero, one, epsilon)})
                   .first;
        }
        return it->second;
      },
      CompositionMode::kAdaptiveIid);
}

CompositionReport AdaptiveGeneral(const Scenario& scenario,
                                  const CompositionSpec& spec, double epsilon,
                                  std::uint64_t template_cap,
                                  std::uint64_t prefix_cap,
                                  PairMaximization pair_max) {
  spec.Validate(scenario);
  const PartitionLaw law(scenario.n(), spec.format);
  const int j = scenario.critical_index();
  std::map<std::pair<std::vector<int>, int>, Pmf> unconditioned_cache;
  std::map<std::pair<std::vector<int>, int>, Directional> directional_cache;
  return AdaptiveCore(
      scenario, spec, epsilon, prefix_cap, pair_max,
      [&](int k) { return EnumerateTemplates(law.Restricted(j, k), template_cap); },
      [&](const Template& t, int l, int attribute) -> const Pmf& {
        std::vector<int> block = t.blocks[static_cast<std::size_t>(l - 1)];
        std::sort(block.begin(), block.end());
        auto key = std::pair{block, attribute};
        auto it = unconditioned_cache.find(key);
        if (it == unconditioned_cache.end()) {
          Pmf law_l = PropertyQuery(attribute).AnswerLaw(scenario, block);
          it = unconditioned_cache.emplace(std::move(key), std::move(law_l)).first;
        }
        return it->second;
      },
      [&](const Template& t, int k, int attribute) {
        std::vector<int> block = t.blocks[static_cast<std::size_t>(k - 1)];
        std::sort(block.begin(), block.end());
        auto key = std::pair{block, attribute};
        auto it = directional_cache.find(key);
        if (it == directional_cache.end()) {
          const PropertyQuery kernel(attribute);
          const Pmf one =
              kernel.ConditionalAnswerLaw(scenario, block, 1 << attribute);
          const Pmf zero = kernel.ConditionalAnswerLaw(scenario, block, 0);
          it = directional_cache
                   .emplace(std::move(key),
                            Directional{HockeyStick(one, zero, epsilon),
                                        HockeyStick(zero, one, epsilon)})
                   .first;
        }
        return it->second;
      },
      CompositionMode::kAdaptiveGeneral);
}

CompositionReport Compose(const Scenario& scenario,
                          const CompositionSpec& spec, double epsilon,
                          const ComposeOptions& options) {
  const Scenario effective =
      scenario.model() == EntryModel::kKnown && spec.adaptive()
          ? scenario.ToExplicit()
          : scenario;
  const std::uint64_t template_cap =
      std::holds_alternative<Enumerate>(options.mode)
          ? std::get<Enumerate>(options.mode).cap
          : kDefaultTemplateCap;
  if (spec.adaptive()) {
    return effective.iid()
               ? AdaptiveIid(effective, spec, epsilon, options.prefix_cap,
                             options.pair_max)
               : AdaptiveGeneral(effective, spec, epsilon, template_cap,
                                 options.prefix_cap, options.pair_max);
  }
  return effective.iid() ? NonadaptiveIid(effective, spec, epsilon)
                         : NonadaptiveGeneral(effective, spec, epsilon,
                                              options.mode);
}

}  // namespace spacct

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


#include "scenario_io.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "spacct/curve.h"
#include "spacct/errors.h"

namespace spacct {
namespace {

using nlohmann::json;

void RejectUnknown(const json& object, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!object.is_object()) throw DomainError(where + ": expected an object");
  for (const auto& [key, value] : object.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw DomainError(where + ": unknown field '" + key + "'");
  }
}

const json& Required(const json& object, const char* key,
                     const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw DomainError(where + ": missing field '" + key + "'");
  }
  return *it;
}

double Number(const json& value, const std::string& what) {
  if (!value.is_number()) throw DomainError(what + ": expected a number");
  return value.get<double>();
}

std::int64_t Integer(const json& value, const std::string& what) {
  if (!value.is_number_integer()) {
    throw DomainError(what + ": expected an integer");
  }
  return value.get<std::int64_t>();
}

int SmallInt(const json& value, const std::string& what) {
  const std::int64_t v = Integer(value, what);
  if (v < -(1LL << 30) || v > (1LL << 30)) {
    throw DomainError(what + ": out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t Count(const json& value, const std::string& what) {
  const std::int64_t v = Integer(value, what);
  if (v < 1) throw DomainError(what + ": must be positive");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> NumberList(const json& value, const std::string& what) {
  if (!value.is_array()) throw DomainError(what + ": expected a list");
  std::vector<double> out;
  for (const json& v : value) out.push_back(Number(v, what));
  return out;
}

QueryDescriptor ParseQuery(const json& value, const std::string& where) {
  RejectUnknown(value, where, {"attribute"});
  QueryDescriptor q;
  if (value.contains("attribute")) {
    q.attribute = SmallInt(value["attribute"], where + ".attribute");
  }
  return q;
}

void ParseBranches(const json& node, int id, AdaptiveTree& tree,
                   const std::string& where) {
  if (!node.contains("branches")) return;
  const json& branches = node["branches"];
  if (!branches.is_array()) throw DomainError(where + ".branches: expected a list");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string bw = where + ".branches[" + std::to_string(i) + "]";
    const json& branch = branches[i];
    RejectUnknown(branch, bw, {"below", "then"});
    std::optional<int> below;
    if (branch.contains("below")) below = SmallInt(branch["below"], bw + ".below");
    const json& child = Required(branch, "then", bw);
    RejectUnknown(child, bw + ".then", {"query", "branches"});
    const int child_id = tree.AddChild(
        id, below, ParseQuery(Required(child, "query", bw + ".then"),
                              bw + ".then.query"));
    ParseBranches(child, child_id, tree, bw + ".then");
  }
}

AdaptiveTree ParseTree(const json& root) {
  RejectUnknown(root, "adaptive", {"query", "branches"});
  AdaptiveTree tree(
      ParseQuery(Required(root, "query", "adaptive"), "adaptive.query"));
  ParseBranches(root, 0, tree, "adaptive");
  return tree;
}

Scenario ParseEntries(const json& entries, int n, int critical_index) {
  const std::string where = "entries";
  if (!entries.is_object()) throw DomainError(where + ": expected an object");
  const json& kind = Required(entries, "kind", where);
  if (!kind.is_string()) throw DomainError("entries.kind: expected a string");
  const std::string k = kind.get<std::string>();
  const json& p = Required(entries, "p", where);
  if (k == "iid") {
    RejectUnknown(entries, where, {"kind", "p"});
    if (p.is_array()) {
      return Scenario::IidAttributes(n, NumberList(p, "entries.p"),
                                     critical_index);
    }
    return Scenario::Iid(n, Number(p, "entries.p"), critical_index);
  }
  if (k == "explicit") {
    RejectUnknown(entries, where, {"kind", "p"});
    if (!p.is_array() || static_cast<int>(p.size()) != n) {
      throw DomainError("entries.p: expected a list of n probabilities");
    }
    if (!p.empty() && p.front().is_array()) {
      std::vector<std::vector<double>> rows;
      for (const json& row : p) rows.push_back(NumberList(row, "entries.p"));
      return Scenario::ExplicitAttributes(std::move(rows), critical_index);
    }
    return Scenario::Explicit(NumberList(p, "entries.p"), critical_index);
  }
  if (k == "known") {
    RejectUnknown(entries, where, {"kind", "p", "known", "known_positive"});
    return Scenario::Known(
        n, Number(p, "entries.p"),
        SmallInt(Required(entries, "known", where), "entries.known"),
        SmallInt(Required(entries, "known_positive", where),
                 "entries.known_positive"),
        critical_index);
  }
  throw DomainError("entries.kind: expected iid, explicit or known");
}

}  // namespace

ScenarioFile ParseScenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("scenario is not valid JSON: ") + e.what());
  }
  RejectUnknown(doc, "scenario",
                {"schema_version", "n", "entries", "critical_index", "format",
                 "queries", "adaptive", "epsilons", "mode", "trials", "seed",
                 "template_cap", "prefix_cap"});
  const int version =
      SmallInt(Required(doc, "schema_version", "scenario"), "schema_version");
  if (version != kScenarioSchemaVersion) {
    throw DomainError("schema_version: unsupported version " +
                      std::to_string(version));
  }
  const int n = SmallInt(Required(doc, "n", "scenario"), "n");
  const int critical_index =
      doc.contains("critical_index")
          ? SmallInt(doc["critical_index"], "critical_index")
          : 1;

  const json& format_json = Required(doc, "format", "scenario");
  if (!format_json.is_array()) throw DomainError("format: expected a list");
  TemplateFormat format;
  for (const json& s : format_json) format.sizes.push_back(SmallInt(s, "format"));

  if (doc.contains("queries") == doc.contains("adaptive")) {
    throw DomainError("scenario: exactly one of 'queries' and 'adaptive' is required");
  }
  std::variant<std::vector<QueryDescriptor>, AdaptiveTree> queries =
      std::vector<QueryDescriptor>{};
  if (doc.contains("queries")) {
    const json& list = doc["queries"];
    if (!list.is_array()) throw DomainError("queries: expected a list");
    std::vector<QueryDescriptor> descriptors;
    for (std::size_t i = 0; i < list.size(); ++i) {
      descriptors.push_back(
          ParseQuery(list[i], "queries[" + std::to_string(i) + "]"));
    }
    queries = std::move(descriptors);
  } else {
    queries = ParseTree(doc["adaptive"]);
  }

  ScenarioFile file{
      ParseEntries(Required(doc, "entries", "scenario"), n, critical_index),
      CompositionSpec{std::move(format), std::move(queries)},
      {}};
  file.spec.Validate(file.scenario);

  file.epsilons = doc.contains("epsilons")
                      ? NumberList(doc["epsilons"], "epsilons")
                      : DefaultEpsilonGrid();
  ValidateEpsilonGrid(file.epsilons);

  if (doc.contains("mode")) {
    const json& mode = doc["mode"];
    const std::string m = mode.is_string() ? mode.get<std::string>() : "";
    if (m == "auto") {
      file.mode = RunMode::kAuto;
    } else if (m == "enumerate") {
      file.mode = RunMode::kEnumerate;
    } else if (m == "monte-carlo") {
      file.mode = RunMode::kMonteCarlo;
    } else {
      throw DomainError("mode: expected auto, enumerate or monte-carlo");
    }
  }
  if (doc.contains("trials")) file.trials = Count(doc["trials"], "trials");
  if (doc.contains("seed")) {
    const std::int64_t seed = Integer(doc["seed"], "seed");
    if (seed < 0) throw DomainError("seed: must be nonnegative");
    file.seed = static_cast<std::uint64_t>(seed);
  }
  if (doc.contains("template_cap")) {
    file.template_cap = Count(doc["template_cap"], "template_cap");
  }
  if (doc.contains("prefix_cap")) {
    file.prefix_cap = Count(doc["prefix_cap"], "prefix_cap");
  }
  return file;
}

ScenarioFile LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseScenario(text.str());
}

}  // namespace spacct

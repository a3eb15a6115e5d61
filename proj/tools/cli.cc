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


#include "cli.h"

#include <charconv>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "scenario_io.h"
#include "spacct/baseline.h"
#include "spacct/compose.h"
#include "spacct/curve.h"
#include "spacct/errors.h"
#include "spacct/oracle.h"
#include "spacct/spc.h"
#include "spacct/tables.h"
#include "spacct/verify.h"

namespace spacct {
namespace {

using nlohmann::json;

class Output {
 public:
  Output(std::ostream& fallback, const std::string& path) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DomainError("cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string CsvRow(std::initializer_list<std::string> fields) {
  std::string row;
  for (const std::string& f : fields) {
    if (!row.empty()) row += ',';
    row += f;
  }
  return row + '\n';
}

// ---------------------------------------------------------------- curve

struct CurveArgs {
  std::string scenario;
  std::optional<int> n;
  std::optional<double> p;
  std::optional<int> sample_size;
  std::optional<int> known;
  int known_positive = 0;
  std::vector<double> epsilons;
  std::string format = "csv";
  std::string out;
};

CompositionReport ComposeFile(const ScenarioFile& file, double epsilon,
                              std::ostream* err) {
  ComposeOptions options;
  options.prefix_cap = file.prefix_cap;
  if (file.mode == RunMode::kMonteCarlo) {
    options.mode = MonteCarlo{file.trials, file.seed};
    return Compose(file.scenario, file.spec, epsilon, options);
  }
  options.mode = Enumerate{file.template_cap};
  try {
    return Compose(file.scenario, file.spec, epsilon, options);
  } catch (const CapacityError& e) {
    if (file.mode != RunMode::kAuto || file.spec.adaptive()) throw;
    if (err != nullptr) {
      *err << "note: " << e.what() << "; switching to Monte-Carlo\n";
    }
    options.mode = MonteCarlo{file.trials, file.seed};
    return Compose(file.scenario, file.spec, epsilon, options);
  }
}

int RunCurve(const CurveArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<CurvePoint> points;
  if (!a.scenario.empty()) {
    if (a.n || a.p || a.sample_size || a.known) {
      throw DomainError("--scenario cannot be combined with inline flags");
    }
    const ScenarioFile file = LoadScenario(a.scenario);
    const std::vector<double> eps = a.epsilons.empty() ? file.epsilons : a.epsilons;
    ValidateEpsilonGrid(eps);
    for (double e : eps) {
      points.push_back({e, ComposeFile(file, e, &err).total_delta});
    }
  } else {
    if (!a.n) throw DomainError("curve: --n is required");
    if (!a.p) throw DomainError("curve: --p is required");
    if (!a.sample_size) throw DomainError("curve: --sample-size is required");
    const std::vector<double> eps =
        a.epsilons.empty() ? DefaultEpsilonGrid() : a.epsilons;
    ValidateEpsilonGrid(eps);
    const Scenario scenario =
        a.known ? Scenario::Known(*a.n, *a.p, *a.known, a.known_positive)
                : Scenario::Iid(*a.n, *a.p);
    for (double e : eps) {
      const double delta = a.known
                               ? SpcKnownEntries(scenario, *a.sample_size, e)
                               : SpcIid(scenario, *a.sample_size, e);
      points.push_back({e, delta});
    }
  }
  const PrivacyCurve curve(std::move(points));
  Output sink(out, a.out);
  if (a.format == "json") {
    json doc = {{"points", json::array()}};
    for (const CurvePoint& pt : curve.points()) {
      doc["points"].push_back({{"epsilon", pt.epsilon}, {"delta", pt.delta}});
    }
    sink.stream() << doc.dump(2) << '\n';
  } else {
    sink.stream() << "epsilon,delta\n";
    for (const CurvePoint& pt : curve.points()) {
      sink.stream() << CsvRow({FormatNumber(pt.epsilon), FormatNumber(pt.delta)});
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- tables

struct TableArgs {
  bool check = false;
  bool strict_dp = false;
  std::string format = "csv";
  std::string out;
};

std::string CellName(const PublishedCell& c) {
  return "m=" + std::to_string(c.m) + " eps=" + FormatNumber(c.epsilon);
}

int RunTable(TableId id, const TableArgs& a, std::ostream& out,
             std::ostream& err) {
  const TableSpec spec = GetTableSpec(id);
  const std::vector<TableCell> cells = ComputeTable(spec);
  std::vector<CellCheck> checks;
  if (a.check) checks = CheckTable(id, cells);

  bool failed = false;
  for (const CellCheck& c : checks) {
    const std::string name = CellName(c.published);
    if (!c.delta_ok) {
      err << "FAIL " << name << ": delta " << FormatNumber(c.computed.delta_sp)
          << " vs printed " << FormatNumber(c.published.delta) << '\n';
      failed = true;
    }
    if (!c.sigma_ok) {
      err << "FAIL " << name << ": sigma " << FormatNumber(c.computed.sigma)
          << " vs printed " << FormatNumber(c.published.sigma) << '\n';
      failed = true;
    }
    if (!c.dp_ok) {
      err << (a.strict_dp ? "FAIL " : "note ") << name << ": dp_queries "
          << c.computed.dp.k_max << " vs printed " << c.published.dp_queries
          << '\n';
      failed = failed || a.strict_dp;
    }
    if (*c.published.note != '\0') {
      err << "flag " << name << ": " << c.published.note << '\n';
    }
  }
  if (a.check) {
    err << spec.name << " check: " << (failed ? "FAILED" : "ok") << '\n';
  }

  Output sink(out, a.out);
  if (a.format == "json") {
    json doc = {{"table", spec.name},
                {"n", spec.n},
                {"p", spec.p},
                {"cells", json::array()}};
    for (const TableCell& c : cells) {
      doc["cells"].push_back({{"m", c.m},
                              {"sigma", c.sigma},
                              {"eps", c.epsilon},
                              {"delta_sp", c.delta_sp},
                              {"dp_queries", c.dp.k_max},
                              {"dp_per_query_epsilon", c.dp.per_query_epsilon},
                              {"dp_per_query_delta", c.dp.per_query_delta}});
    }
    if (a.check) {
      json report = json::array();
      for (const CellCheck& c : checks) {
        report.push_back({{"m", c.published.m},
                          {"eps", c.published.epsilon},
                          {"printed_delta", c.published.delta},
                          {"printed_sigma", c.published.sigma},
                          {"printed_dp_queries", c.published.dp_queries},
                          {"delta_ok", c.delta_ok},
                          {"sigma_ok", c.sigma_ok},
                          {"dp_ok", c.dp_ok},
                          {"note", c.published.note}});
      }
      doc["check"] = {{"passed", !failed}, {"cells", report}};
    }
    sink.stream() << doc.dump(2) << '\n';
  } else {
    sink.stream() << "m,sigma,eps,delta_sp,dp_queries\n";
    for (const TableCell& c : cells) {
      sink.stream() << CsvRow({std::to_string(c.m), FormatNumber(c.sigma),
                               FormatNumber(c.epsilon), FormatNumber(c.delta_sp),
                               std::to_string(c.dp.k_max)});
    }
  }
  return failed ? kExitCheckFailed : kExitOk;
}

// ---------------------------------------------------------------- compose

struct ComposeArgs {
  std::string scenario;
  bool verify = false;
  std::uint64_t oracle_cap = kDefaultOracleCap;
  std::string out;
};

json ReportJson(const CompositionReport& r) {
  json blocks = json::array();
  for (const BlockTerm& t : r.per_block) {
    blocks.push_back(
        {{"block", t.block}, {"weight", t.weight}, {"term", t.term}});
  }
  json doc = {{"epsilon", r.epsilon},
              {"mode", ModeName(r.mode)},
              {"total_delta", r.total_delta},
              {"unclamped_delta", r.unclamped_delta},
              {"per_block", blocks}};
  if (r.half_width) doc["half_width"] = *r.half_width;
  if (r.critical_pair) {
    doc["critical_pair"] = {r.critical_pair->first, r.critical_pair->second};
  }
  return doc;
}

int RunCompose(const ComposeArgs& a, std::ostream& out, std::ostream& err) {
  const ScenarioFile file = LoadScenario(a.scenario);
  std::optional<ExactMechanismLaw> exact;
  if (a.verify) exact = BuildExactMechanismLaw(file.scenario, file.spec, a.oracle_cap);
  json reports = json::array();
  bool failed = false;
  for (double eps : file.epsilons) {
    const CompositionReport report = ComposeFile(file, eps, &err);
    json doc = ReportJson(report);
    if (exact) {
      const double delta = DHat(exact->conditional, eps);
      const double margin = report.total_delta - delta;
      doc["exact_delta"] = delta;
      doc["margin"] = margin;
      if (margin < -kDominationSlack) {
        err << "FAIL eps=" << FormatNumber(eps) << ": bound "
            << FormatNumber(report.total_delta) << " below exact "
            << FormatNumber(delta) << '\n';
        failed = true;
      }
    }
    reports.push_back(std::move(doc));
  }
  Output sink(out, a.out);
  sink.stream() << json{{"reports", reports}}.dump(2) << '\n';
  return failed ? kExitCheckFailed : kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> trials;
  bool json_output = false;
  std::string out;
};

int RunVerify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.seed = a.seed;
  options.mc_trials = a.trials;
  const std::vector<VerifyRow> rows = RunOracleMatrix(options);
  int violations = 0;
  int inconsistent = 0;
  for (const VerifyRow& r : rows) {
    if (!Dominated(r)) ++violations;
    if (!McConsistent(r)) ++inconsistent;
  }
  Output sink(out, a.out);
  if (a.json_output) {
    json list = json::array();
    for (const VerifyRow& r : rows) {
      json row = {{"instance", r.label},
                  {"epsilon", r.epsilon},
                  {"exact_delta", r.exact},
                  {"theorem_delta", r.bound},
                  {"margin", r.margin},
                  {"dominated", Dominated(r)}};
      if (r.mc) {
        row["mc_estimate"] = r.mc->estimate;
        row["mc_half_width"] = r.mc->half_width;
        row["mc_consistent"] = McConsistent(r);
      }
      list.push_back(std::move(row));
    }
    sink.stream() << json{{"rows", list},
                          {"margin_violations", violations},
                          {"mc_inconsistent", inconsistent}}
                         .dump(2)
                  << '\n';
  } else {
    sink.stream() << "instance,epsilon,exact_delta,theorem_delta,margin";
    if (a.trials) sink.stream() << ",mc_estimate,mc_half_width,mc_consistent";
    sink.stream() << '\n';
    for (const VerifyRow& r : rows) {
      sink.stream() << r.label << ',' << FormatNumber(r.epsilon) << ','
                    << FormatNumber(r.exact) << ',' << FormatNumber(r.bound)
                    << ',' << FormatNumber(r.margin);
      if (r.mc) {
        sink.stream() << ',' << FormatNumber(r.mc->estimate) << ','
                      << FormatNumber(r.mc->half_width) << ','
                      << (McConsistent(r) ? "yes" : "no");
      }
      sink.stream() << '\n';
    }
  }
  err << "verify: " << rows.size() << " rows, " << violations
      << " margin violations";
  if (a.trials) err << ", " << inconsistent << " Monte-Carlo inconsistencies";
  err << '\n';
  return violations > 0 ? kExitCheckFailed : kExitOk;
}

// ---------------------------------------------------------------- dp-compare

struct DpArgs {
  std::string table;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> sigma;
  std::optional<int> n;
  int grid_points = DpSearchOptions{}.delta0_grid_points;
  std::string out;
};

int RunDpCompare(const DpArgs& a, std::ostream& out) {
  DpSearchOptions options;
  options.delta0_grid_points = a.grid_points;
  if (!a.table.empty()) {
    const TableId id = a.table == "table1" ? TableId::kOne : TableId::kTwo;
    const std::vector<TableCell> cells = ComputeTable(GetTableSpec(id), options);
    Output sink(out, a.out);
    sink.stream() << "m,eps,delta_sp,sigma,dp_queries,printed_dp_queries,"
                     "deviation,within_tolerance,per_query_epsilon,"
                     "per_query_delta\n";
    for (const CellCheck& c : CheckTable(id, cells)) {
      sink.stream() << CsvRow(
          {std::to_string(c.published.m), FormatNumber(c.published.epsilon),
           FormatNumber(c.computed.delta_sp), FormatNumber(c.computed.sigma),
           std::to_string(c.computed.dp.k_max),
           std::to_string(c.published.dp_queries),
           std::to_string(c.computed.dp.k_max - c.published.dp_queries),
           c.dp_ok ? "yes" : "no",
           FormatNumber(c.computed.dp.per_query_epsilon),
           FormatNumber(c.computed.dp.per_query_delta)});
    }
    return kExitOk;
  }
  if (!a.epsilon || !a.delta || !a.sigma || !a.n) {
    throw DomainError(
        "dp-compare: give --table, or all of --eps, --delta, --sigma, --n");
  }
  const DpCalibration c = MaxDpQueries(*a.epsilon, *a.delta, *a.sigma, *a.n, options);
  Output sink(out, a.out);
  sink.stream() << "epsilon,delta,sigma,n,dp_queries,per_query_epsilon,"
                   "per_query_delta,sensitivity\n"
                << CsvRow({FormatNumber(*a.epsilon), FormatNumber(*a.delta),
                           FormatNumber(*a.sigma), std::to_string(*a.n),
                           std::to_string(c.k_max),
                           FormatNumber(c.per_query_epsilon),
                           FormatNumber(c.per_query_delta),
                           FormatNumber(c.sensitivity)});
  return kExitOk;
}

void Diagnose(std::ostream& err, bool color, const std::string& message) {
  err << (color ? "\033[31merror:\033[0m " : "error: ") << message << '\n';
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, bool color) {
  CLI::App app{"Statistical-privacy accounting for sampled property queries",
               "spacct"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"csv", "json"});

  CurveArgs curve;
  auto* c = app.add_subcommand("curve", "Privacy curve of one sampled query or a scenario");
  c->add_option("--scenario", curve.scenario, "Scenario JSON file");
  c->add_option("--n", curve.n, "Database size");
  c->add_option("--p", curve.p, "Occurrence probability");
  c->add_option("--sample-size", curve.sample_size, "Sample size s");
  c->add_option("--known", curve.known, "Entries known to the adversary");
  c->add_option("--known-positive", curve.known_positive,
                "Known entries with value 1");
  c->add_option("--eps,--eps-grid", curve.epsilons, "Comma-separated epsilons")
      ->delimiter(',');
  c->add_option("--format", curve.format)->check(formats);
  c->add_option("--out", curve.out, "Write output to PATH");

  TableArgs table1;
  TableArgs table2;
  CLI::App* tables[2];
  int t = 0;
  for (auto* args : {&table1, &table2}) {
    auto* s = app.add_subcommand(t == 0 ? "table1" : "table2",
                                 t == 0 ? "Recompute the n = 32768 table"
                                        : "Recompute the n = 1024 table");
    s->add_flag("--check", args->check, "Compare against the printed cells");
    s->add_flag("--strict-dp", args->strict_dp,
                "Also fail on #DP cells outside tolerance");
    s->add_option("--format", args->format)->check(formats);
    s->add_option("--out", args->out, "Write output to PATH");
    tables[t++] = s;
  }

  ComposeArgs compose;
  auto* cp = app.add_subcommand("compose", "Composition report for a scenario");
  cp->add_option("--scenario", compose.scenario, "Scenario JSON file")->required();
  cp->add_flag("--verify", compose.verify,
               "Also enumerate the exact mechanism and check domination");
  cp->add_option("--oracle-cap", compose.oracle_cap, "Enumeration cap for --verify");
  cp->add_option("--out", compose.out, "Write output to PATH");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run the tiny-instance oracle matrix");
  v->add_option("--seed", verify.seed, "Master seed");
  v->add_option("--trials", verify.trials, "Add Monte-Carlo rows with N trials")
      ->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 40));
  v->add_flag("--json", verify.json_output, "Machine-readable report");
  v->add_option("--out", verify.out, "Write output to PATH");

  DpArgs dp;
  auto* d = app.add_subcommand("dp-compare", "Largest DP query count at equal noise");
  d->add_option("--table", dp.table)->check(CLI::IsMember({"table1", "table2"}));
  d->add_option("--eps", dp.epsilon, "Target epsilon");
  d->add_option("--delta", dp.delta, "Target delta");
  d->add_option("--sigma", dp.sigma, "Per-query noise standard deviation");
  d->add_option("--n", dp.n, "Database size");
  d->add_option("--grid-points", dp.grid_points, "Per-query delta grid size")
      ->check(CLI::Range(2, 1 << 16));
  d->add_option("--out", dp.out, "Write output to PATH");

  std::vector<const char*> argv{"spacct"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    for (char& ch : what) {
      if (ch == '\n') ch = ' ';
    }
    Diagnose(err, color, what);
    return kExitValidation;
  }

  try {
    if (c->parsed()) return RunCurve(curve, out, err);
    if (tables[0]->parsed()) return RunTable(TableId::kOne, table1, out, err);
    if (tables[1]->parsed()) return RunTable(TableId::kTwo, table2, out, err);
    if (cp->parsed()) return RunCompose(compose, out, err);
    if (v->parsed()) return RunVerify(verify, out, err);
    if (d->parsed()) return RunDpCompare(dp, out);
  } catch (const CapacityError& e) {
    Diagnose(err, color, e.what());
    return kExitCapacity;
  } catch (const DomainError& e) {
    Diagnose(err, color, e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    Diagnose(err, color, e.what());
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace spacct

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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "exact.h"
#include "scenario_io.h"
#include "spacct/curve.h"
#include "spacct/errors.h"

namespace spacct {
namespace {

using ::nlohmann::json;
using ::spacct::testing::ReferenceHockeyStick;
using ::spacct::testing::ReferencePropertyLaw;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

double Num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("spacct_cli_test_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++) + ".json"))
                .string();
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

TEST(CurveCommandTest, ReproducesPrintedRow) {
  const Result r = Invoke({"curve", "--n", "32768", "--p", "0.5", "--sample-size",
                        "1024", "--eps", "0.005,0.01,0.02"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = ParseCsv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"epsilon", "delta"}));
  const double printed[] = {0.0225, 0.0204, 0.0164};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(Num(rows[i + 1][1]), printed[i], 0.0005);
  }
}

TEST(CurveCommandTest, WholeDatabaseIsTotalVariation) {
  const Result r = Invoke(
      {"curve", "--n", "4", "--p", "0.5", "--sample-size", "4", "--eps", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = ParseCsv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const double tv = ReferenceHockeyStick(ReferencePropertyLaw(4, 0.5, 1),
                                         ReferencePropertyLaw(4, 0.5, 0), 0.0);
  EXPECT_NEAR(Num(rows[1][1]), tv, 1e-12);
  EXPECT_NEAR(Num(rows[1][1]), 0.375, 1e-12);
}

TEST(CurveCommandTest, SmallerSampleLeaksMore) {
  auto delta = [](const std::string& s) {
    const Result r = Invoke({"curve", "--n", "32768", "--p", "0.5",
                          "--sample-size", s, "--eps", "0.005"});
    return Num(ParseCsv(r.out)[1][1]);
  };
  EXPECT_GT(delta("64"), delta("1024"));
}

TEST(CurveCommandTest, JsonPoints) {
  const Result r = Invoke({"curve", "--n", "100", "--p", "0.3", "--sample-size",
                        "10", "--eps", "0,0.1", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc.at("points").size(), 2u);
  EXPECT_EQ(doc["points"][1]["epsilon"].get<double>(), 0.1);
  EXPECT_GE(doc["points"][0]["delta"].get<double>(),
            doc["points"][1]["delta"].get<double>());
}

TEST(CurveCommandTest, ValidationErrors) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"curve", "--p", "0.5", "--sample-size", "4"},
        {"curve", "--n", "4", "--p", "1.5", "--sample-size", "4"},
        {"curve", "--n", "4", "--p", "0.5", "--sample-size", "5"},
        {"curve", "--n", "4", "--p", "0.5", "--sample-size", "2", "--eps",
         "0.2,0.1"},
        {"curve", "--n", "4", "--p", "0.5", "--sample-size", "2", "--eps",
         "abc"},
        {"frobnicate"}}) {
    const Result r = Invoke(args);
    EXPECT_EQ(r.code, kExitValidation) << args[0] << " " << r.err;
    EXPECT_TRUE(r.out.empty());
    ASSERT_FALSE(r.err.empty());
    EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << r.err;
  }
}

TEST(CurveCommandTest, HelpSucceeds) {
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
  EXPECT_EQ(Invoke({"curve", "--help"}).code, kExitOk);
}

TEST(CurveCommandTest, WritesToOutPath) {
  const TempFile file("");
  const Result r = Invoke({"curve", "--n", "8", "--p", "0.5", "--sample-size",
                        "4", "--eps", "0", "--out", file.path()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(file.path());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "epsilon,delta");
}

TEST(TableCommandTest, ChecksPass) {
  for (const char* name : {"table1", "table2"}) {
    const Result r = Invoke({name, "--check"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.err.find(std::string(name) + " check: ok"), std::string::npos);
    const auto rows = ParseCsv(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"m", "sigma", "eps",
                                                 "delta_sp", "dp_queries"}));
    EXPECT_EQ(rows.size(), std::string(name) == "table1" ? 16u : 10u);
  }
  EXPECT_NE(Invoke({"table2", "--check"}).err.find(".0.0711"), std::string::npos);
}

TEST(TableCommandTest, StrictDpReportsDiagnosticMismatch) {
  // The query counts are a best-effort reconstruction and do not match the
  // printed ones; --strict-dp turns that into a check failure.
  EXPECT_EQ(Invoke({"table2", "--check", "--strict-dp"}).code, kExitCheckFailed);
}

TEST(TableCommandTest, JsonMatchesCsv) {
  const auto csv = ParseCsv(Invoke({"table1"}).out);
  const json doc = json::parse(Invoke({"table1", "--format", "json"}).out);
  ASSERT_EQ(doc.at("cells").size() + 1, csv.size());
  for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
    const json& cell = doc["cells"][i];
    const auto& row = csv[i + 1];
    EXPECT_EQ(cell.at("m").get<int>(), std::stoi(row[0]));
    EXPECT_EQ(cell.at("sigma").get<double>(), Num(row[1]));
    EXPECT_EQ(cell.at("eps").get<double>(), Num(row[2]));
    EXPECT_EQ(cell.at("delta_sp").get<double>(), Num(row[3]));
    EXPECT_EQ(cell.at("dp_queries").get<int>(), std::stoi(row[4]));
  }
}

TEST(TableCommandTest, LocaleIndependent) {
  struct CommaDecimal : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
    char do_thousands_sep() const override { return '.'; }
    std::string do_grouping() const override { return "\3"; }
  };
  const std::string expected = Invoke({"table2"}).out;
  const std::locale saved =
      std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const std::string actual = Invoke({"table2"}).out;
  std::locale::global(saved);
  EXPECT_EQ(actual, expected);
  EXPECT_EQ(expected.find('\r'), std::string::npos);
}

TEST(ComposeCommandTest, EqualBlocksMatchCurve) {
  const TempFile file(R"({"schema_version": 1, "n": 1024,
      "entries": {"kind": "iid", "p": 0.5}, "format": [256, 256, 256, 256],
      "queries": [{"attribute": 0}, {"attribute": 0}, {"attribute": 0},
                  {"attribute": 0}],
      "epsilons": [0.05, 0.1]})");
  const Result r = Invoke({"compose", "--scenario", file.path()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  const auto curve = ParseCsv(Invoke({"curve", "--n", "1024", "--p", "0.5",
                                   "--sample-size", "256", "--eps",
                                   "0.05,0.1"})
                                  .out);
  ASSERT_EQ(doc.at("reports").size(), 2u);
  for (int i = 0; i < 2; ++i) {
    const json& report = doc["reports"][i];
    EXPECT_EQ(report.at("mode"), "nonadaptive-iid");
    EXPECT_EQ(report.at("per_block").size(), 4u);
    EXPECT_NEAR(report.at("total_delta").get<double>(), Num(curve[i + 1][1]),
                1e-12);
  }
}

TEST(ComposeCommandTest, VerifyDominates) {
  const TempFile file(R"({"schema_version": 1, "n": 4,
      "entries": {"kind": "explicit", "p": [0.2, 0.8, 0.5, 0.5]},
      "critical_index": 3, "format": [2, 2],
      "queries": [{"attribute": 0}, {"attribute": 0}],
      "epsilons": [0, 0.1, 1]})");
  const Result r = Invoke({"compose", "--scenario", file.path(), "--verify"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const json& report : json::parse(r.out).at("reports")) {
    EXPECT_EQ(report.at("mode"), "nonadaptive-general");
    EXPECT_LE(report.at("exact_delta").get<double>(),
              report.at("total_delta").get<double>() + 1e-9);
    EXPECT_GE(report.at("margin").get<double>(), -1e-9);
  }
}

TEST(ComposeCommandTest, PrefixCapIsCapacityError) {
  const TempFile file(R"({"schema_version": 1, "n": 64,
      "entries": {"kind": "iid", "p": [0.5, 0.3]}, "format": [16, 16, 16],
      "adaptive": {"query": {"attribute": 0}, "branches": [
        {"below": 8, "then": {"query": {"attribute": 1},
                              "branches": [{"then": {"query": {"attribute": 0}}}]}},
        {"then": {"query": {"attribute": 0},
                  "branches": [{"then": {"query": {"attribute": 1}}}]}}]},
      "prefix_cap": 100, "epsilons": [0.1]})");
  const Result r = Invoke({"compose", "--scenario", file.path()});
  EXPECT_EQ(r.code, kExitCapacity);
  EXPECT_NE(r.err.find("cap 100"), std::string::npos) << r.err;
}

TEST(ComposeCommandTest, MissingScenarioFile) {
  EXPECT_EQ(Invoke({"compose", "--scenario", "/nonexistent/x.json"}).code,
            kExitValidation);
}

TEST(VerifyCommandTest, JsonReportAllDominated) {
  const Result r = Invoke({"verify", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc.at("margin_violations").get<int>(), 0);
  EXPECT_EQ(doc.at("rows").size(), 72u);
  for (const json& row : doc["rows"]) {
    EXPECT_GE(row.at("margin").get<double>(), -1e-9) << row.dump();
  }
}

TEST(VerifyCommandTest, CsvColumns) {
  const auto rows = ParseCsv(Invoke({"verify"}).out);
  EXPECT_EQ(rows[0],
            (std::vector<std::string>{"instance", "epsilon", "exact_delta",
                                      "theorem_delta", "margin"}));
  EXPECT_EQ(rows.size(), 73u);
  EXPECT_EQ(Invoke({"verify", "--trials", "10"}).code, kExitValidation);
}

TEST(DpCompareCommandTest, InlineAndTable) {
  const Result inline_run = Invoke({"dp-compare", "--eps", "0.1", "--delta",
                                 "0.1", "--sigma", "0.0869", "--n", "1024"});
  ASSERT_EQ(inline_run.code, kExitOk) << inline_run.err;
  const auto rows = ParseCsv(inline_run.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][4], "dp_queries");
  EXPECT_GE(std::stoi(rows[1][4]), 1);

  const auto table = ParseCsv(Invoke({"dp-compare", "--table", "table2"}).out);
  EXPECT_EQ(table.size(), 10u);
  EXPECT_EQ(Invoke({"dp-compare", "--eps", "0.1"}).code, kExitValidation);
}

TEST(ScenarioIoTest, ParsesEntryKinds) {
  const ScenarioFile iid = ParseScenario(R"({"schema_version": 1, "n": 8,
      "entries": {"kind": "iid", "p": [0.5, 0.25]}, "format": [4, 4],
      "queries": [{"attribute": 1}, {"attribute": 0}]})");
  EXPECT_EQ(iid.scenario.attributes(), 2);
  EXPECT_EQ(iid.scenario.probability(3, 1), 0.25);
  EXPECT_EQ(iid.epsilons, DefaultEpsilonGrid());
  EXPECT_EQ(iid.mode, RunMode::kAuto);

  const ScenarioFile known = ParseScenario(R"({"schema_version": 1, "n": 8,
      "entries": {"kind": "known", "p": 0.5, "known": 3, "known_positive": 1},
      "format": [4], "queries": [{"attribute": 0}], "mode": "enumerate",
      "epsilons": [0.1], "seed": 9})");
  EXPECT_EQ(known.scenario.known(), 3);
  EXPECT_EQ(known.scenario.known_positive(), 1);
  EXPECT_EQ(known.mode, RunMode::kEnumerate);
  EXPECT_EQ(known.seed, 9u);

  const ScenarioFile adaptive = ParseScenario(R"({"schema_version": 1,
      "n": 6, "entries": {"kind": "explicit",
                          "p": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]},
      "format": [2, 2], "adaptive": {"query": {"attribute": 0},
      "branches": [{"below": 1, "then": {"query": {"attribute": 0}}},
                   {"then": {"query": {"attribute": 0}}}]}})");
  EXPECT_TRUE(adaptive.spec.adaptive());
  EXPECT_EQ(adaptive.scenario.probability(4, 0), 0.4);
}

TEST(ScenarioIoTest, RejectsMalformedDocuments) {
  const std::string base_tail =
      R"("format": [2, 2], "queries": [{"attribute": 0}, {"attribute": 0}]})";
  for (const std::string& text : {
           std::string(R"({"schema_version": 2, "n": 4,
               "entries": {"kind": "iid", "p": 0.5}, )") + base_tail,
           std::string(R"({"n": 4, "entries": {"kind": "iid", "p": 0.5}, )") +
               base_tail,
           std::string(R"({"schema_version": 1, "n": 4,
               "entries": {"kind": "iid", "p": 0.5, "extra": 1}, )") +
               base_tail,
           std::string(R"({"schema_version": 1, "n": 4,
               "entries": {"kind": "poisson", "p": 0.5}, )") + base_tail,
           std::string(R"({"schema_version": 1, "n": 4,
               "entries": {"kind": "iid", "p": 0.5}, "format": [2, 2],
               "queries": [{"attribute": 0, "noise": 1}, {"attribute": 0}]})"),
           std::string(R"({"schema_version": 1, "n": 4,
               "entries": {"kind": "iid", "p": 0.5}, "format": [2, 2]})"),
           std::string(R"({"schema_version": 1, "n": 4,
               "entries": {"kind": "iid", "p": 0.5}, "format": [2, 2],
               "queries": [{"attribute": 0}, {"attribute": 0}],
               "adaptive": {"query": {"attribute": 0}}})"),
           std::string(R"({"schema_version": 1, "n": 4,
               "entries": {"kind": "iid", "p": 0.5}, "mode": "fast", )") +
               base_tail,
           std::string(R"({"schema_version": 1, "n": 4,
               "entries": {"kind": "iid", "p": 0.5}, "epsilons": [0.1, 0], )") +
               base_tail,
           std::string("{not json"),
       }) {
    EXPECT_THROW(ParseScenario(text), DomainError) << text;
  }
}

}  // namespace
}  // namespace spacct

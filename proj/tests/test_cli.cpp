// Copyright 2026 The tfim-datasets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "tfim/cli.hpp"

using namespace tfim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tfim");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tfim::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t body_lines(const fs::path &p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    ++n;
  return n == 0 ? 0 : n - 1;
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    root = fs::temp_directory_path() /
           ("tfim_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root);
    fs::create_directories(root);
  }
  void TearDown() override { fs::remove_all(root); }

  std::string dir(const std::string &name) const { return (root / name).string(); }

  void generate(const std::string &name, int rows, int cols, int samples,
                std::initializer_list<std::string> extra = {}) {
    std::vector<std::string> a{"generate", "--rows", std::to_string(rows), "--cols",
                               std::to_string(cols), "--samples", std::to_string(samples),
                               "--seed", "7", "--out-dir", dir(name)};
    a.insert(a.end(), extra);
    const auto r = invoke(a);
    ASSERT_EQ(r.code, 0) << r.err;
  }

  void synthetic(const std::string &name, double a, double b, double c,
                 std::vector<double> hs = {1.0, 1.25, 1.5, 1.75, 2.0}) {
    Dataset ds{2, {}};
    for (std::size_t hi = 0; hi < hs.size(); ++hi)
      for (std::uint64_t s = 0; s < 3; ++s) {
        const double h = hs[hi];
        ds.records.push_back({h, s, RngStream::id_for(hi, s), a * h * h + b * h + c + static_cast<double>(s),
                              0.0, 0.0, {0.0, 0.0}});
      }
    fs::create_directories(dir(name));
    write_dataset(ds, fs::path(dir(name)) / "dataset.csv");
  }

  fs::path root;
};

} // namespace

TEST_F(Cli, GenerateWritesFixedLayout) {
  generate("run", 2, 2, 10);
  EXPECT_EQ(body_lines(root / "run" / "dataset.csv"), 170u);
  EXPECT_TRUE(fs::exists(root / "run" / "correlations.csv"));
  const auto m = read_manifest(root / "run" / "manifest.txt");
  EXPECT_EQ(m.config.master_seed, 7u);
  EXPECT_EQ(m.summary.records, 170u);
}

TEST_F(Cli, GenerateRequiresSeed) {
  const auto r = invoke({"generate", "--rows", "2", "--cols", "2", "--out-dir", dir("x")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--seed"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(root / "x"));
}

TEST_F(Cli, GenerateFlagDomain) {
  EXPECT_EQ(invoke({"generate", "--rows", "2", "--cols", "2", "--seed", "1", "--out-dir", dir("x"),
                 "--state-mode", "gibbs"})
                .code,
            2);
  EXPECT_EQ(invoke({"generate", "--rows", "0", "--cols", "2", "--seed", "1", "--out-dir", dir("x")}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(Cli, GenerateIsByteIdenticalAcrossRuns) {
  generate("a", 2, 2, 10);
  generate("b", 2, 2, 10, {"--threads", "3"});
  for (const char *f : {"dataset.csv", "correlations.csv"})
    EXPECT_EQ(slurp(root / "a" / f), slurp(root / "b" / f)) << f;
}

TEST_F(Cli, AnalyzeSummaryAndIdempotence) {
  generate("run", 2, 2, 10);
  const auto in = dir("run") + "/dataset.csv";
  ASSERT_EQ(invoke({"analyze", "--input", in, "--bins", "8"}).code, 0);
  EXPECT_EQ(body_lines(root / "run" / "summary.csv"), 17u * 3u);
  EXPECT_TRUE(fs::exists(root / "run" / "plots" / "correlation_vs_distance.csv"));
  const auto first = slurp(root / "run" / "summary.csv");
  const auto hist = slurp(root / "run" / "plots" / "hist_energy.csv");
  ASSERT_EQ(invoke({"analyze", "--input", in, "--bins", "8"}).code, 0);
  EXPECT_EQ(slurp(root / "run" / "summary.csv"), first);
  EXPECT_EQ(slurp(root / "run" / "plots" / "hist_energy.csv"), hist);
}

TEST_F(Cli, AnalyzeRejectsEmptyAndMalformed) {
  generate("run", 2, 2, 1);
  const auto path = root / "run" / "dataset.csv";
  const auto text = slurp(path);
  const auto header = text.substr(0, text.find('\n') + 1);
  std::ofstream(path, std::ios::trunc) << header;
  auto r = invoke({"analyze", "--input", path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("empty dataset"), std::string::npos) << r.err;

  std::ofstream(path, std::ios::trunc) << header << "1.0,0,0,abc,0,0,0,0,0,0\n";
  r = invoke({"analyze", "--input", path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":2"), std::string::npos) << r.err;

  EXPECT_EQ(invoke({"analyze", "--input", dir("missing.csv")}).code, 1);
}

TEST_F(Cli, CorrelateWritesTable) {
  generate("run", 2, 2, 20);
  const auto r = invoke({"correlate", "--input", dir("run") + "/correlations.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(body_lines(root / "run" / "correlation_table.csv"), 3u);
}

TEST_F(Cli, DeriveLinearAndQuadratic) {
  synthetic("lin", 0.0, 3.0, 1.0);
  ASSERT_EQ(invoke({"derive", "--input", dir("lin") + "/dataset.csv", "--order", "1", "--per-sample"}).code, 0);
  const auto lin = slurp(root / "lin" / "derivative_order1.csv");
  std::istringstream ls(lin);
  std::string line;
  std::getline(ls, line);
  std::size_t rows = 0;
  while (std::getline(ls, line)) {
    const auto cells = csv::split(line);
    EXPECT_NEAR(csv::parse_double(cells[1], "", 0), 3.0, 1e-9) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 5u);
  EXPECT_EQ(body_lines(root / "lin" / "derivative_order1_per_sample.csv"), 15u);

  synthetic("quad", 1.5, -2.0, 0.5);
  ASSERT_EQ(invoke({"derive", "--input", dir("quad") + "/dataset.csv", "--order", "2"}).code, 0);
  std::istringstream qs(slurp(root / "quad" / "derivative_order2.csv"));
  std::getline(qs, line);
  while (std::getline(qs, line))
    EXPECT_NEAR(csv::parse_double(csv::split(line)[1], "", 0), 3.0, 1e-9) << line;
}

TEST_F(Cli, DeriveErrors) {
  synthetic("lin", 0.0, 1.0, 0.0);
  EXPECT_EQ(invoke({"derive", "--input", dir("lin") + "/dataset.csv", "--order", "3"}).code, 2);
  synthetic("ragged", 0.0, 1.0, 0.0, {1.0, 1.5, 2.5});
  const auto r = invoke({"derive", "--input", dir("ragged") + "/dataset.csv"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("uniform"), std::string::npos) << r.err;
}

TEST_F(Cli, ReportAcrossSystemSizes) {
  generate("n4", 2, 2, 2, {"--h-max", "1.5"});
  generate("n8", 2, 4, 2, {"--h-max", "1.5"});
  generate("n16", 4, 4, 2, {"--h-max", "1.5"});
  const auto r = invoke({"report", dir("n16"), dir("n4"), dir("n8"), "--out-dir", dir("rep")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(root / "rep" / "correlation_report.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "distance,4_spins,8_spins,16_spins");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line))
    { const auto v = csv::split(line); rows.emplace_back(v.begin(), v.end()); }
  ASSERT_EQ(rows.size(), 15u);
  EXPECT_NE(rows[2][1], "-");
  EXPECT_EQ(rows[3][1], "-");
  EXPECT_NE(rows[6][2], "-");
  EXPECT_EQ(rows[7][2], "-");
  EXPECT_NE(rows[14][3], "-");
  EXPECT_EQ(body_lines(root / "rep" / "energy_variance_vs_n.csv"), 3u);
  EXPECT_EQ(body_lines(root / "rep" / "energy_variance_by_h.csv"), 9u);
}

TEST_F(Cli, ReportSingleRunAndErrors) {
  generate("n4", 2, 2, 3);
  ASSERT_EQ(invoke({"report", dir("n4"), "--out-dir", dir("rep")}).code, 0);
  EXPECT_EQ(body_lines(root / "rep" / "correlation_report.csv"), 3u);
  EXPECT_EQ(invoke({"report", "--out-dir", dir("rep")}).code, 2);

  const auto m = root / "n4" / "manifest.txt";
  auto text = slurp(m);
  text.replace(text.find("schema_version=1"), 16, "schema_version=99");
  std::ofstream(m, std::ios::trunc) << text;
  const auto r = invoke({"report", dir("n4"), "--out-dir", dir("rep2")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("schema"), std::string::npos) << r.err;
}

// Black-box: the installed executable, observed only through exit status.
TEST_F(Cli, ExecutableExitCodes) {
  const auto run = [&](const std::string &args) {
    const std::string cmd = std::string(TFIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("generate --rows 2 --cols 2 --out-dir " + dir("x")), 2);
  EXPECT_EQ(run("generate --rows 2 --cols 2 --samples 2 --seed 1 --out-dir " + dir("x")), 0);
  EXPECT_EQ(run("generate --rows 3 --cols 1 --samples 2 --seed 1 --out-dir " + dir("odd")), 2);
  EXPECT_EQ(run("generate --rows 2 --cols 1 --samples 2 --seed 1 --out-dir " + dir("x") + "/dataset.csv/sub"), 1);
  EXPECT_EQ(run("analyze --input " + dir("x") + "/dataset.csv"), 0);
  EXPECT_EQ(run("analyze --input " + dir("nope.csv")), 1);
  EXPECT_EQ(run("derive --input " + dir("x") + "/dataset.csv --order 2"), 0);
  EXPECT_EQ(run("derive --input " + dir("x") + "/dataset.csv --order 5"), 2);
  EXPECT_EQ(run("correlate --input " + dir("x") + "/correlations.csv"), 0);
  EXPECT_EQ(run("report " + dir("x") + " --out-dir " + dir("rep")), 0);
  EXPECT_EQ(run("report " + dir("absent")), 2);
}

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "derivkit/bench.hpp"
#include "derivkit/report.hpp"
#include "derivkit/series_io.hpp"
#include "test_support.hpp"

namespace derivkit {
namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string command = std::string(DERIVKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("derivkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    dict_ = (dir_ / "tiny.drvk").string();
    testing::tiny_dictionary().save(dict_);
    series_ = (dir_ / "series.csv").string();
    std::ofstream out(series_);
    out << "s\n";
    for (int t = 0; t < 64; ++t) out << std::sin(0.1 * t) << "\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string dict_;
  std::string series_;
};

TEST_F(Cli, EstimateWritesOneRowPerSample) {
  ASSERT_EQ(run_cli("estimate --dict " + dict_ + " --in " + series_ + " --d 1 --tau 0.5 --out " + path("est.csv")), 0);
  std::ifstream in(path("est.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "index,value,sigma");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 64);
}

TEST_F(Cli, ArgumentErrors) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("estimate --dict " + dict_ + " --in " + series_ + " --d 1 --out x.csv"), 2);
  EXPECT_EQ(run_cli("estimate --dict " + dict_ + " --in " + series_ + " --d 3 --tau 1 --out " + path("e.csv")), 2);
  EXPECT_EQ(run_cli("estimate --dict " + dict_ + " --in " + series_ + " --d 1 --tau 0 --out " + path("e.csv")), 2);
  EXPECT_EQ(run_cli("bench --dict " + dict_ + " --methods proposed,nope --out " + path("r.json")), 2);
  EXPECT_EQ(run_cli("bench --dict " + dict_ + " --scale huge --out " + path("r.json")), 2);
  EXPECT_EQ(run_cli("bench --dict " + dict_ + " --methods proposed --out " + path("r.json")), 2);
  EXPECT_EQ(run_cli("train --out " + path("t.drvk") + " --tol 2"), 2);
}

TEST_F(Cli, IoAndFormatErrors) {
  EXPECT_EQ(run_cli("estimate --dict " + path("missing.drvk") + " --in " + series_ + " --d 1 --tau 1 --out " +
                    path("e.csv")),
            3);
  std::ofstream(path("bad.drvk")) << "not a dictionary";
  EXPECT_EQ(run_cli("estimate --dict " + path("bad.drvk") + " --in " + series_ + " --d 1 --tau 1 --out " +
                    path("e.csv")),
            3);
  std::ofstream(path("bad.csv")) << "s\n1\nx\n";
  EXPECT_EQ(run_cli("estimate --dict " + dict_ + " --in " + path("bad.csv") + " --d 1 --tau 1 --out " + path("e.csv")),
            3);
  EXPECT_EQ(run_cli("report --in " + path("missing.json") + " --table coverage"), 3);
  std::ofstream(path("bad.json")) << "{\"schema_version\": 99}";
  EXPECT_EQ(run_cli("report --in " + path("bad.json") + " --table coverage"), 3);
}

TEST_F(Cli, ReportTables) {
  ErrorReport r;
  r.scale = "mini";
  r.methods = {"proposed"};
  CaseEntry c;
  c.instants = 10;
  for (int d = 1; d <= 4; ++d) {
    c.entries.push_back({"proposed", d, 0.5, {}, {}});
    c.coverage.push_back({2, 4, 8, 10});
  }
  r.cases.push_back(c);
  save_report(r, path("r.json"));
  ASSERT_EQ(run_cli("report --in " + path("r.json") + " --table coverage --csv " + path("c.csv")), 0);
  std::ifstream in(path("c.csv"));
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), coverage_csv(r));
  EXPECT_EQ(run_cli("report --in " + path("r.json") + " --table percentiles --csv " + path("p.csv")), 0);
  EXPECT_EQ(run_cli("report --in " + path("r.json") + " --table bogus"), 2);
}

}  // namespace
}  // namespace derivkit

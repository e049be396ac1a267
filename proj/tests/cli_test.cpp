#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "pgsw/cli.hpp"
#include "pgsw/io.hpp"
#include "pgsw/parallel.hpp"

namespace pgsw {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun result;
  result.code = run_cli(args, out, err);
  result.out = out.str();
  result.err = err.str();
  set_default_threads(1);
  return result;
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pgsw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gen"}).code, 2);
  EXPECT_EQ(run({"gen", "--n", "abc"}).code, 2);
  EXPECT_EQ(run({"--threads", "0", "gen", "--n", "8"}).code, 2);
}

TEST_F(CliTest, HelpAndVersionExitZero) {
  const CliRun help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("gen"), std::string::npos);
  const CliRun version = run({"--version"});
  EXPECT_EQ(version.code, 0);
  EXPECT_EQ(version.out, std::string(kToolVersion) + "\n");
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  EXPECT_EQ(run({"gen", "--n", "16", "--alpha", "0.6"}).code, 1);
  const CliRun missing = run({"mix", "--graph", path("missing.swg")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("error:"), std::string::npos);
  EXPECT_EQ(run({"perc", "--n", "8", "--r", "0.5", "--mode", "ring"}).code, 1);
}

TEST_F(CliTest, GenIsReproducibleAndParses) {
  const CliRun a = run({"--seed", "5", "gen", "--n", "16"});
  const CliRun b = run({"--seed", "5", "--threads", "3", "gen", "--n", "16"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NO_THROW(parse_graph(a.out));
  EXPECT_NE(run({"--seed", "6", "gen", "--n", "16"}).out, a.out);
  const GraphFile gn = parse_graph(run({"--seed", "5", "gen", "--n", "16", "--mode", "gn"}).out);
  EXPECT_EQ(gn.edge_count(EdgeTag::long_edge), 0u);
  const GraphFile aug = parse_graph(run({"--seed", "5", "gen", "--n", "16", "--mode", "augmented"}).out);
  EXPECT_GE(aug.vertex_count(), parse_graph(a.out).vertex_count());
}

TEST_F(CliTest, FileOutputsCarryManifests) {
  ASSERT_EQ(run({"--seed", "2", "gen", "--n", "12", "--out", path("g.swg"), "--points-out", path("p.txt")}).code, 0);
  EXPECT_TRUE(fs::exists(path("g.swg")));
  EXPECT_TRUE(fs::exists(path("g.swg.manifest")));
  EXPECT_TRUE(fs::exists(path("p.txt")));
  const std::string manifest = read_text_file(path("g.swg.manifest"));
  EXPECT_NE(manifest.find("subcommand=gen"), std::string::npos);
  EXPECT_NE(manifest.find(file_digest(path("g.swg"))), std::string::npos);
}

TEST_F(CliTest, AnalysisCommandsProduceCsv) {
  ASSERT_EQ(run({"--seed", "3", "gen", "--n", "12", "--out", path("g.swg")}).code, 0);
  const CliRun mix = run({"mix", "--graph", path("g.swg")});
  ASSERT_EQ(mix.code, 0) << mix.err;
  EXPECT_EQ(mix.out.rfind("t_mix,mode,lambda1,gap,pi_min,h,h_method,bound_4_6,cheeger_ok,runtime_ms\n", 0), 0u);
  EXPECT_NE(mix.out.find(",NA\n"), std::string::npos);
  const CliRun cuts = run({"cuts", "--graph", path("g.swg")});
  ASSERT_EQ(cuts.code, 0) << cuts.err;
  EXPECT_EQ(cuts.out.rfind("n,d,seed,diam,method,delta,iota,h,witness_size\n", 0), 0u);
  const CliRun diam = run({"diam", "--graph", path("g.swg"), "--method", "sweep"});
  ASSERT_EQ(diam.code, 0) << diam.err;
  EXPECT_NE(diam.out.find("double_sweep"), std::string::npos);
  const CliRun perc = run({"perc", "--n", "8", "--r-grid", "0.4:0.8:0.2", "--trials", "3"});
  ASSERT_EQ(perc.code, 0) << perc.err;
  EXPECT_EQ(std::count(perc.out.begin(), perc.out.end(), '\n'), 4);
}

TEST_F(CliTest, ThreadCountNeverChangesResults) {
  ASSERT_EQ(run({"--seed", "4", "gen", "--n", "14", "--out", path("g.swg")}).code, 0);
  const std::vector<std::vector<std::string>> commands{
      {"mix", "--graph", path("g.swg"), "--starts", "sample:8"},
      {"cuts", "--graph", path("g.swg")},
      {"diam", "--graph", path("g.swg"), "--method", "sweep"},
      {"perc", "--n", "10", "--r", "0.6", "--trials", "6", "--mode", "torus"},
  };
  for (const auto& command : commands) {
    std::vector<std::string> one{"--seed", "4", "--threads", "1"};
    std::vector<std::string> many{"--seed", "4", "--threads", "4"};
    one.insert(one.end(), command.begin(), command.end());
    many.insert(many.end(), command.begin(), command.end());
    const CliRun a = run(one);
    const CliRun b = run(many);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << command.front();
  }
}

TEST_F(CliTest, ScaleWritesRowsSummaryAndManifest) {
  write_text_file(path("cfg.txt"), "n_grid=12,14,16\ntrials=1\nmetrics=vertices,diam_gn,diam_swn\n");
  const CliRun scale = run({"--quiet", "scale", "--config", path("cfg.txt"), "--out-dir", path("out")});
  ASSERT_EQ(scale.code, 0) << scale.err;
  EXPECT_TRUE(fs::exists(path("out/rows.csv")));
  EXPECT_TRUE(fs::exists(path("out/summary.csv")));
  EXPECT_TRUE(fs::exists(path("out/manifest.txt")));
  EXPECT_TRUE(scale.err.empty());
  EXPECT_EQ(run({"scale", "--config", path("none.txt"), "--out-dir", path("out")}).code, 1);
}

TEST_F(CliTest, SelftestPasses) {
  const CliRun selftest = run({"selftest"});
  EXPECT_EQ(selftest.code, 0);
  EXPECT_NE(selftest.out.find("selftest passed"), std::string::npos);
}

}  // namespace
}  // namespace pgsw

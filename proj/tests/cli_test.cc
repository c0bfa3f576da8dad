#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "critnet/failure.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace critnet {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("critnet_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    WriteFile(dir_ / "tri.txt", "0 1 1\n1 2 1\n0 2 1\n");
    WriteFile(dir_ / "light.tm", "0 1 0.6\n");
    WriteFile(dir_ / "heavy.tm", "0 1 1.8\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> owned = {"critnet"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : owned) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return critnet::Run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Invoke({}), kExitUsage);
  EXPECT_EQ(Invoke({"bogus"}), kExitUsage);
  EXPECT_EQ(Invoke({"route", "--topology", P("tri.txt")}), kExitUsage);  // no matrix
  EXPECT_EQ(Invoke({"route", "--topology", P("missing.txt"), "--tm", P("light.tm")}), kExitUsage);
  EXPECT_EQ(Invoke({"route", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--tm-total",
                    "1", "--seed", "1"}),
            kExitUsage);
  EXPECT_EQ(Invoke({"route", "--topology", P("tri.txt"), "--tm-total", "1"}), kExitUsage);
  EXPECT_EQ(Invoke({"route", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--routing",
                    "rip"}),
            kExitUsage);
}

TEST_F(CliTest, HelpIsSuccess) {
  EXPECT_EQ(Invoke({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("upgrade"), std::string::npos);
}

TEST_F(CliTest, BadInputIsInvalid) {
  WriteFile(dir_ / "loop.txt", "0 1\n1 1\n");
  EXPECT_EQ(Invoke({"route", "--topology", P("loop.txt"), "--tm", P("light.tm")}), kExitInvalid);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos);
}

TEST_F(CliTest, RouteWritesLoads) {
  ASSERT_EQ(Invoke({"route", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--out-dir",
                    P("out")}),
            kExitOk);
  EXPECT_EQ(out_.str(), "mlu 0.3\n");
  std::string loads = ReadFile(dir_ / "out" / "loads.csv");
  EXPECT_EQ(loads.substr(0, loads.find('\n')), "link,u,v,capacity,load,utilization");
  EXPECT_TRUE(fs::exists(dir_ / "out" / "routing.json"));
}

TEST_F(CliTest, AbileneScenarioCount) {
  ASSERT_EQ(Invoke({"failures", "--topology", std::string(CRITNET_DATA_DIR) + "/abilene.graphml",
                    "--f", "2", "--out-dir", P("out")}),
            kExitOk);
  EXPECT_EQ(out_.str(), "94 scenarios\n");
}

TEST_F(CliTest, ImpactThenCritical) {
  ASSERT_EQ(Invoke({"impact", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--f", "2",
                    "--out-dir", P("out")}),
            kExitOk);
  std::vector<ImpactRow> rows = LoadImpactCsv(P("out/impact.csv"));
  ASSERT_EQ(rows.size(), 3u);
  for (const ImpactRow& r : rows) EXPECT_NEAR(r.record.impact, 2.0, 1e-9);

  ASSERT_EQ(Invoke({"critical", "--impact", P("out/impact.csv"), "--out-dir", P("out")}),
            kExitOk);
  EXPECT_NE(out_.str().find("0 worst\n1 worst\n2 worst\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "critical.csv"));
}

TEST_F(CliTest, UpgradePlan) {
  ASSERT_EQ(Invoke({"upgrade", "--topology", P("tri.txt"), "--tm", P("heavy.tm"), "--f", "2",
                    "--out-dir", P("out")}),
            kExitOk);
  nlohmann::json plan = nlohmann::json::parse(ReadFile(dir_ / "out" / "upgrade.json"));
  EXPECT_NEAR(plan.at("cost").get<double>(), 2.4, 1e-9);
  std::string csv = ReadFile(dir_ / "out" / "upgrade.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "link,a_e");
}

TEST_F(CliTest, InfeasibleTe) {
  EXPECT_EQ(Invoke({"te", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--f", "2",
                    "--out-dir", P("out")}),
            kExitInvalid);
  EXPECT_NE(err_.str().find("infeasible"), std::string::npos);
  EXPECT_EQ(Invoke({"te", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--f", "2",
                    "--no-cap", "--out-dir", P("out")}),
            kExitInvalid);  // feasible, but not certified on every scenario
  nlohmann::json plan = nlohmann::json::parse(ReadFile(dir_ / "out" / "te.json"));
  EXPECT_NEAR(plan.at("worst_mlu").get<double>(), 1.3, 1e-9);
}

TEST_F(CliTest, ConfigFileAndEnvironment) {
  WriteFile(dir_ / "run.toml", "[route]\ntopology = \"" + P("tri.txt") + "\"\ntm = \"" +
                                   P("light.tm") + "\"\nrouting = \"ospf\"\n");
  ::setenv("CRITNET_OUT_DIR", P("env").c_str(), 1);
  int rc = Invoke({"--config", P("run.toml"), "route"});
  ::unsetenv("CRITNET_OUT_DIR");
  ASSERT_EQ(rc, kExitOk) << err_.str();
  EXPECT_EQ(out_.str(), "mlu 0.6\n");
  EXPECT_TRUE(fs::exists(dir_ / "env" / "loads.csv"));
}

TEST_F(CliTest, GenIsDeterministic) {
  ASSERT_EQ(Invoke({"gen", "--nodes", "12", "--seed", "9", "--out-dir", P("a")}), kExitOk);
  ASSERT_EQ(Invoke({"gen", "--nodes", "12", "--seed", "9", "--out-dir", P("b")}), kExitOk);
  EXPECT_EQ(ReadFile(dir_ / "a" / "topology.txt"), ReadFile(dir_ / "b" / "topology.txt"));
  EXPECT_EQ(ReadFile(dir_ / "a" / "tm.txt"), ReadFile(dir_ / "b" / "tm.txt"));

  ASSERT_EQ(Invoke({"impact", "--topology", P("a/topology.txt"), "--tm", P("a/tm.txt"),
                    "--threads", "1", "--out-dir", P("a")}),
            kExitOk);
  ASSERT_EQ(Invoke({"impact", "--topology", P("a/topology.txt"), "--tm", P("a/tm.txt"),
                    "--threads", "3", "--out-dir", P("b")}),
            kExitOk);
  EXPECT_EQ(ReadFile(dir_ / "a" / "impact.csv"), ReadFile(dir_ / "b" / "impact.csv"));
}

TEST_F(CliTest, EncodeWritesGraph) {
  ASSERT_EQ(Invoke({"encode", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--f", "1",
                    "--out-dir", P("out")}),
            kExitOk);
  nlohmann::json graph = nlohmann::json::parse(ReadFile(dir_ / "out" / "graph.json"));
  EXPECT_EQ(graph.at("nodes").size(), 9u);  // 3 links, 1 flow, 2 paths, 3 failures
  EXPECT_TRUE(fs::exists(dir_ / "out" / "labels.csv"));
}

TEST_F(CliTest, ReportAggregates) {
  ASSERT_EQ(Invoke({"impact", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--f", "2",
                    "--out-dir", P("o")}),
            kExitOk);
  ASSERT_EQ(Invoke({"impact", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--f", "2",
                    "--evaluator", "simplified", "--out-dir", P("s")}),
            kExitOk);
  ASSERT_EQ(Invoke({"validate", "--topology", P("tri.txt"), "--tm", P("light.tm"), "--f", "2",
                    "--out-dir", P("v")}),
            kExitOk);
  ASSERT_EQ(Invoke({"report", "--impact", P("o/impact.csv"), "--oracle", P("o/impact.csv"),
                    "--simplified", P("s/impact.csv"), "--plan", P("v/validation.json"),
                    "--out-dir", P("r")}),
            kExitOk)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "r" / "impact_distribution.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "r" / "impact_summary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "r" / "simplified_error.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "r" / "constraint_counts.csv"));
  EXPECT_NE(out_.str().find("3 of 3 scenarios within 10%"), std::string::npos);
}

}  // namespace
}  // namespace critnet

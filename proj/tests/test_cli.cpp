#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "skillmatch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = skillmatch::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string model(const char* name) { return std::string(SKILLMATCH_MODELS_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("skillmatch_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, CheckReportsStabilityAndSchema) {
  const auto r = run({"check", "--model", model("w.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "check");
  EXPECT_EQ(j["stable"], true);
  const auto u = run({"check", "--model", model("unstable.json")});
  EXPECT_EQ(u.code, 0);
  EXPECT_EQ(u.json()["stable"], false);
  EXPECT_FALSE(u.json()["violations"].empty());
}

TEST(Cli, ExactValuesForW) {
  const auto r = run({"exact", "--model", model("w.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_NEAR(j["all_busy_prob"].get<double>(), 0.15, 1e-12);
  EXPECT_NEAR(j["mean_waiting_alis"].get<double>(), 1.275, 1e-12);
  EXPECT_NEAR(j["unmatched_fraction"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["permutation_route"]["all_busy_prob"].get<double>(), 0.15, 1e-12);
}

TEST(Cli, UnstableExactIsInputError) {
  const auto r = run({"exact", "--model", model("unstable.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BadArgumentsExitTwo) {
  EXPECT_EQ(run({"simulate", "--model", model("w.json"), "--bogus"}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", model("w.json"), "--kind", "lifo"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"check", "--model", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"simulate", "--model", model("w.json"), "--events", "10", "--warmup", "20"}).code, 2);
}

TEST(Cli, SimulateIsByteDeterministic) {
  const std::vector<std::string> args = {"simulate", "--model", model("w.json"), "--kind", "alis", "--events", "20000",
                                         "--seed", "3", "--out", "json", "--replications", "2"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = a.json();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["replications"].size(), 2u);
  EXPECT_EQ(j["replications"][1]["seed"], 4);
}

TEST(Cli, SimulateWritesDepartureCsv) {
  const auto path = temp_path("departures.csv");
  const auto r = run({"simulate", "--model", model("n1.json"), "--kind", "matching", "--events", "5000", "--departures",
                      path, "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "replication,event_index,time,customer_type,sojourn_events,sojourn_time");
  EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 100);
  std::remove(path.c_str());
}

TEST(Cli, CoupleExitCodes) {
  auto ok = run({"couple", "--variant", "nsystem", "--l1", "3", "--l2", "2", "--m1", "6", "--m2", "6", "--events", "20000"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(ok.json()["passed"], true);
  auto bad = run({"couple", "--variant", "redundancy-matching", "--model", model("w.json"), "--events", "20000", "--fault",
                  "tail-copy"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.json()["passed"], false);
  auto eq = run({"couple", "--variant", "redundancy-matching", "--model", model("w.json"), "--events", "20000"});
  EXPECT_EQ(eq.code, 0) << eq.err;
}

TEST(Cli, MatchflowModes) {
  for (const char* mode : {"directed", "bipartite", "alis-variant"}) {
    std::vector<std::string> args = {"matchflow", "--model", model("w.json"), "--marks", "5000", "--mode", mode};
    if (std::string(mode) != "alis-variant") args.push_back("--verify-reversal");
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << mode << " " << r.err;
    EXPECT_EQ(r.json()["mode"], mode);
  }
  EXPECT_EQ(run({"matchflow", "--model", model("w.json"), "--mode", "alis-variant", "--verify-reversal"}).code, 2);
  const auto path = temp_path("links.csv");
  const auto r = run({"matchflow", "--model", model("w.json"), "--marks", "500", "--emit-links", path});
  ASSERT_EQ(r.code, 0);
  const auto csv = slurp(path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "customer_pos,server_pos,customer_type,server_type");
  std::remove(path.c_str());
}

TEST(Cli, NsystemClosedFormsAndSweep) {
  const auto r = run({"nsystem", "--l1", "2", "--l2", "145", "--m1", "3", "--m2", "150"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_NEAR(j["ENr_total"].get<double>(), 35.375, 5e-4);
  EXPECT_NEAR(j["ENq_total"].get<double>(), 32.4993, 5e-4);
  const auto s = run({"nsystem", "--sweep"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(std::count(s.out.begin(), s.out.end(), '\n'), 244);
  EXPECT_EQ(run({"nsystem", "--l1", "1", "--l2", "3", "--m1", "5", "--m2", "2"}).code, 2);
}

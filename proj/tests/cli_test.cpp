#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "corgal/figures.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CORGAL_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("corgal_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    std::ofstream(dir_ / "fig1.json") << corgal::figures::kTrainDocument;
    std::ofstream(dir_ / "fig2.json") << corgal::figures::kCounterexampleDocument;
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const std::string kGoal = std::string("(") + corgal::figures::kGoalText + ")";

}  // namespace

TEST_F(Cli, CheckVerdicts) {
  auto r = run("check --model " + path("fig1.json") + " --state w --formula '[! ~p] K c ~p'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
  r = run("check --model " + path("fig2.json") + " --state pqr --formula '<[{a}]> <[{b}]> " + kGoal + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "false\n");
}

TEST_F(Cli, FormulaFromStdin) {
  std::ofstream(path("f.txt")) << "K a ~p\n";
  auto r = run("check --model " + path("fig1.json") + " --state w < " + path("f.txt"));
  EXPECT_EQ(r.code, 0);
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run("check --model " + path("fig1.json") + " --state w --formula 'p &'").code, 2);
  EXPECT_EQ(run("check --model " + path("fig1.json") + " --state zz --formula p").code, 2);
  EXPECT_EQ(run("check --model " + path("missing.json") + " --state w --formula p").code, 2);
  EXPECT_EQ(run("check --model " + path("fig1.json") + " --state w --formula q").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
}

TEST_F(Cli, CapExceeded) {
  EXPECT_EQ(run("check --model " + path("fig2.json") + " --state pqr --cap 2 --formula '<[{a}]> p'").code, 3);
}

TEST_F(Cli, Trace) {
  auto r = run("check --trace --model " + path("fig1.json") + " --state w --formula '<[{a,b}]> ~K c p'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("<[G]>"), std::string::npos);
}

TEST_F(Cli, Witness) {
  auto r = run("witness --model " + path("fig2.json") + " --state pqr --formula '<[{a,b}]> " + kGoal + "'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("witness: "), std::string::npos);
  EXPECT_NE(r.out.find("a: {pqr, pqnr, npqr}"), std::string::npos) << r.out;

  r = run("witness --model " + path("fig1.json") + " --state w --formula '<{a,b},top>(~K c ~p & ~K c p)'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("a: {w, v}"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("b: {w, v}"), std::string::npos) << r.out;

  EXPECT_EQ(run("witness --model " + path("fig1.json") + " --state w --formula 'K a ~p'").code, 2);
}

TEST_F(Cli, Contract) {
  std::ofstream(path("dup.json")) << R"({"agents": ["a"], "atoms": ["p"], "states": ["x", "y", "z"],
    "valuation": {"x": ["p"], "y": ["p"], "z": []}, "partitions": {"a": [["x", "y", "z"]]}})";
  auto r = run("contract --model " + path("dup.json") + " --out " + path("small.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("y -> x"), std::string::npos);
  EXPECT_NE(r.out.find("3 states -> 2 states"), std::string::npos);
  EXPECT_EQ(run("check --model " + path("small.json") + " --state x --formula 'M a ~p'").code, 0);
  EXPECT_EQ(run("contract --model " + path("dup.json")).code, 2);
}

TEST_F(Cli, Translate) {
  auto r = run("translate --formula '[! p] K a p'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "p -> K a (p -> p)\n");
  EXPECT_EQ(run("translate --formula '[{a}] p'").code, 2);
}

TEST_F(Cli, Suites) {
  auto r = run("suite repro");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"passed\": true"), std::string::npos);
  const auto a = run("suite theorems --count 5 --seed 9");
  const auto b = run("suite theorems --count 5 --seed 9");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("suite open-questions --count 3").code, 0);
  EXPECT_EQ(run("suite axioms --max-states 9").code, 2);
  EXPECT_EQ(run("suite nonsense").code, 2);
}

// Copyright 2026 The expandlab Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "expandlab/cli.hpp"

namespace expandlab::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "expandlab");
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("expandlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string &name) const { return (dir_ / name).string(); }
  std::string toric(int L) {
    const auto p = path("toric" + std::to_string(L) + ".json");
    EXPECT_EQ(call({"zoo", "toric", "--L", std::to_string(L), "--out", p}).code, kOk);
    return p;
  }
  void write(const std::string &name, const std::string &text) { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kUsage);
  EXPECT_EQ(call({"validate"}).code, kUsage);
  EXPECT_EQ(call({"--version"}).code, kOk);
  EXPECT_EQ(call({"robustness", "--code", "x.json", "--construction", "magic"}).code, kUsage);
}

TEST_F(Cli, ValidateReport) {
  const auto code = toric(3);
  const auto rep = path("rep.json");
  auto r = call({"validate", "--code", code, "--json", rep});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("n=18"), std::string::npos);
  auto j = Json::parse(slurp(rep));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["command"], "validate");
  EXPECT_EQ(j["results"]["num_generators"], 16);
  EXPECT_EQ(j["results"]["max_right_degree"], 4);
  EXPECT_TRUE(j["wall_clock_seconds"].is_null());
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
}

TEST_F(Cli, ValidateRejectsNonCommuting) {
  write("bad.json", R"({"d": 2, "n": 1, "generators": ["q:0,x:1,z:0", "q:0,x:0,z:1"]})");
  const auto rep = path("rep.json");
  EXPECT_EQ(call({"validate", "--code", path("bad.json"), "--json", rep}).code, kAssertion);
  auto j = Json::parse(slurp(rep));
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_EQ(j["failures"][0], "code_valid");
}

TEST_F(Cli, MalformedInput) {
  write("broken.json", "{\"d\": 2, ");
  auto r = call({"validate", "--code", path("broken.json")});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("broken.json"), std::string::npos);
  EXPECT_EQ(call({"validate", "--code", path("missing.json")}).code, kUsage);
  EXPECT_EQ(call({"onion", "--code", toric(3), "--u", "0", "--error", "q:0,w:1"}).code, kUsage);
}

TEST_F(Cli, ReportsAreByteIdenticalAcrossRunsAndThreads) {
  const auto code = toric(4);
  std::vector<std::string> base{"robustness", "--code", code, "--construction", "random", "--U-size", "2",
                                "--trials", "300", "--seed", "17"};
  auto a = base, b = base, c = base;
  a.insert(a.end(), {"--json", path("a.json"), "--threads", "1"});
  b.insert(b.end(), {"--json", path("b.json"), "--threads", "1"});
  c.insert(c.end(), {"--json", path("c.json"), "--threads", "4"});
  auto ra = call(a), rb = call(b), rc = call(c);
  EXPECT_EQ(ra.code, rb.code);
  EXPECT_EQ(ra.out, rc.out);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("c.json")));
  auto d = base;
  d[d.size() - 1] = "18";
  d.insert(d.end(), {"--json", path("d.json")});
  call(d);
  EXPECT_NE(slurp(path("a.json")), slurp(path("d.json")));
}

TEST_F(Cli, TimingIsOptIn) {
  const auto code = toric(3);
  EXPECT_EQ(call({"distance", "--code", code, "--json", path("t.json"), "--timing"}).code, kOk);
  auto j = Json::parse(slurp(path("t.json")));
  EXPECT_TRUE(j["wall_clock_seconds"].is_number());
  EXPECT_EQ(j["results"]["distance"], 3);
}

TEST_F(Cli, BudgetExhaustion) {
  const auto code = toric(3);
  setenv("EXPANDLAB_ENUM_BUDGET", "50", 1);
  auto r = call({"robustness", "--code", code, "--construction", "profile", "--cap", "3"});
  unsetenv("EXPANDLAB_ENUM_BUDGET");
  EXPECT_EQ(r.code, kBudget);
  EXPECT_EQ(call({"robustness", "--code", code, "--construction", "profile", "--cap", "1"}).code, kOk);
}

TEST_F(Cli, IndependentSetTarget) {
  const auto code = toric(4);
  EXPECT_EQ(call({"independent-sets", "--code", code, "--kind", "L", "--target", "2"}).code, kOk);
  EXPECT_EQ(call({"independent-sets", "--code", code, "--kind", "L", "--target", "15"}).code, kAssertion);
}

TEST_F(Cli, ClhRoundTrip) {
  const auto code = toric(2);
  const auto inst = path("inst.json"), wit = path("wit.json");
  ASSERT_EQ(call({"zoo", "clh", "--code", code, "--out", inst}).code, kOk);
  EXPECT_EQ(call({"clh", "validate", "--in", inst}).code, kOk);
  ASSERT_EQ(call({"clh", "approx", "--in", inst, "--out", wit}).code, kOk);
  EXPECT_EQ(call({"clh", "verify", "--in", inst, "--witness", wit}).code, kOk);
  auto j = Json::parse(slurp(wit));
  j["claimed_energy"] = 5.0;
  std::ofstream(wit) << j.dump();
  EXPECT_EQ(call({"clh", "verify", "--in", inst, "--witness", wit}).code, kAssertion);
}

TEST_F(Cli, ZooOutputsLoad) {
  const auto css = path("css.json"), graph = path("g.json");
  ASSERT_EQ(call({"zoo", "random-css", "--seed", "3", "--out", css}).code, kOk);
  EXPECT_EQ(call({"validate", "--code", css}).code, kOk);
  ASSERT_EQ(call({"zoo", "random-graph", "--m", "8", "--n", "10", "--left-degree", "3", "--seed", "2", "--out", graph}).code,
            kOk);
  EXPECT_EQ(call({"expansion", "--graph", graph}).code, kOk);
  EXPECT_EQ(call({"zoo", "chain", "--L", "5", "--ell", "2"}).code, kOk);
}

}  // namespace
}  // namespace expandlab::cli

// Copyright 2026 The distq Authors
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

// Runs the distq executable as a subprocess and checks the exit-code contract
// and the report contents.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

using Json = nlohmann::ordered_json;

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(DISTQ_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::int64_t metric(const Json& report, const std::string& name) { return report["metrics"][name].get<std::int64_t>(); }

TEST(CliTest, VerifyNonlocalCnot) {
  const auto r = run("verify nonlocal-cnot --branches exhaustive");
  ASSERT_EQ(r.status, 0);
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["protocol"], "nonlocal-cnot");
  EXPECT_EQ(metric(j[0], "branches_per_input"), 4);
  EXPECT_EQ(j[0]["branches_tested"], 40);
  EXPECT_EQ(j[0]["ebits"], 1);
  EXPECT_EQ(j[0]["cbits"], 2);
  EXPECT_EQ(j[0]["verified"], true);
}

TEST(CliTest, VerifyQftCounts) {
  const auto r = run("verify qft --n 4 --m 2 --branches 50 --inputs 2");
  ASSERT_EQ(r.status, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(metric(j[0], "nonlocal_controlled"), 4);
  EXPECT_EQ(metric(j[0], "total_controlled"), 6);
  EXPECT_EQ(metric(j[0], "local_controlled"), 2);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("verify bogus").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("verify nonlocal-cnot --format xml").status, 2);
  EXPECT_EQ(run("verify nonlocal-cnot --branches many").status, 2);
  EXPECT_EQ(run("qft --n 5 --m 2").status, 2);
  EXPECT_EQ(run("verify nonlocal-cnot --output /nonexistent-dir/r.json").status, 2);
}

TEST(CliTest, VerificationFailureExitsOne) {
  const auto r = run("verify nonlocal-cnot --inputs 1 --corrupt-oracle");
  EXPECT_EQ(r.status, 1);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j[0]["verified"], false);
  EXPECT_GT(j[0]["failure_count"].get<int>(), 0);
  EXPECT_EQ(j[0]["failures"][0]["branch_bits"].size(), 2u);
}

TEST(CliTest, SameSeedSameBytes) {
  const std::string args = "verify distributed-swap --branches 6 --seed 17 --format text";
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, OtherCommands) {
  EXPECT_EQ(run("demo teleport").status, 0);
  EXPECT_EQ(run("report nonlocal-cnot").status, 0);
  const auto plan = run("qft --n 8 --m 4");
  ASSERT_EQ(plan.status, 0);
  EXPECT_EQ(Json::parse(plan.out)["nonlocal_controlled"], 24);
}

}  // namespace

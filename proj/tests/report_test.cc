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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "distq/errors.h"
#include "distq/gates.h"
#include "distq/protocols.h"
#include "distq/report.h"
#include "distq/verify.h"
#include "test_support.h"

namespace distq {
namespace {

using Json = nlohmann::ordered_json;

VerifyConfig quick(std::size_t inputs = 2) {
  VerifyConfig c;
  c.inputs = inputs;
  return c;
}

TEST(VerifyTest, TeleportReportCosts) {
  const auto reports = run_verification("teleport", quick());
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].name, "teleport");
  EXPECT_TRUE(reports[0].verified);
  EXPECT_EQ(reports[0].ledger.ebits_consumed, 1u);
  EXPECT_EQ(reports[0].ledger.cbits_sent, 2u);
  EXPECT_EQ(reports[0].branches_tested, 8u);
  EXPECT_LE(reports[0].max_infidelity, 1e-10);
  ASSERT_EQ(reports[0].message_log.size(), 2u);
  EXPECT_EQ(reports[0].message_log[0].tag, "cat-entangle-r");
}

TEST(VerifyTest, EverySuiteVerifiesOnSmallInputs) {
  for (const auto& name : verifiable_protocols()) {
    if (name == "qft") continue;
    for (const auto& r : run_verification(name, quick(1))) {
      EXPECT_TRUE(r.verified) << r.name << (r.failures.empty() ? "" : ": " + r.failures.front().detail);
      EXPECT_EQ(r.failure_count, 0u) << r.name;
    }
  }
}

TEST(VerifyTest, SampledQft) {
  VerifyConfig c;
  c.branches = {false, 20};
  c.inputs = 1;
  c.qft_n = 6;
  c.qft_m = 3;
  const auto r = run_verification("qft", c);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].name, "qft-n6-m3");
  EXPECT_TRUE(r[0].verified);
  EXPECT_EQ(r[0].branches_tested, 20u);
}

TEST(VerifyTest, UnknownAndInfeasibleRequests) {
  EXPECT_FALSE(is_known_protocol("bogus"));
  EXPECT_TRUE(is_known_protocol("all"));
  EXPECT_THROW(run_verification("bogus", quick()), ParameterError);
  VerifyConfig c;
  c.qft_n = 6;
  c.qft_m = 2;
  EXPECT_THROW(run_verification("qft", c), ParameterError);
  c.qft_m = 4;
  EXPECT_THROW(run_verification("qft", c), ParameterError);
}

TEST(VerifyTest, SameSeedSameReport) {
  VerifyConfig c;
  c.branches = {false, 5};
  c.seed = 99;
  const auto a = render_report(run_verification("refresh-cycle", c), ReportFormat::kJson);
  const auto b = render_report(run_verification("refresh-cycle", c), ReportFormat::kJson);
  EXPECT_EQ(a, b);
  c.seed = 100;
  EXPECT_NE(a, render_report(run_verification("refresh-cycle", c), ReportFormat::kJson));
}

// A harness that only compares fidelities is useless if it cannot fail: the
// same protocol run checked against a wrong oracle must be rejected.
TEST(VerifyTest, WrongOracleIsDetected) {
  std::mt19937_64 rng(81);
  const auto psi = StateVector::random(2, rng);
  auto wrong = psi;
  wrong.apply(gates::cnot(), {1, 0});
  auto right = psi;
  right.apply(gates::cnot(), {0, 1});
  Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 1, 2}}, OutcomeSource::seeded(1));
  net.load_input(psi, {reg(0, 0), reg(1, 0)});
  nonlocal_cnot(net, reg(0, 0), reg(1, 0), ProtocolOptions{true});
  EXPECT_NEAR(testing::fidelity_on(net, {reg(0, 0), reg(1, 0)}, right), 1.0, 1e-10);
  EXPECT_LT(testing::fidelity_on(net, {reg(0, 0), reg(1, 0)}, wrong), 1.0 - 1e-6);
}

TEST(ReportTest, JsonFieldsInOrder) {
  const auto reports = run_verification("teleport", quick());
  const std::vector<ProtocolReport> one{reports[0]};
  const auto j = Json::parse(render_report(one, ReportFormat::kJson));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  std::vector<std::string> keys;
  for (auto it = j[0].begin(); it != j[0].end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want{"protocol", "branches_tested", "ebits", "cbits", "qubits_transported",
                                      "rounds", "max_infidelity", "verified", "message_log", "sections",
                                      "metrics", "failure_count", "failures"};
  EXPECT_EQ(keys, want);
  EXPECT_EQ(j[0]["ebits"], 1);
  EXPECT_EQ(j[0]["cbits"], 2);
  EXPECT_EQ(j[0]["verified"], true);
  const auto& msg = j[0]["message_log"][0];
  std::vector<std::string> msg_keys;
  for (auto it = msg.begin(); it != msg.end(); ++it) msg_keys.push_back(it.key());
  EXPECT_EQ(msg_keys, (std::vector<std::string>{"from", "to", "bit", "tag"}));
}

TEST(ReportTest, EmptyListIsEmptyArray) {
  const auto text = render_report({}, ReportFormat::kJson);
  EXPECT_TRUE(Json::parse(text).is_array());
  EXPECT_TRUE(Json::parse(text).empty());
}

TEST(ReportTest, TextTableCarriesNumbers) {
  const auto reports = run_verification("distributed-swap", quick(1));
  const auto text = render_report(reports, ReportFormat::kText);
  std::istringstream in(text);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_NE(header.find("ebits"), std::string::npos);
  std::istringstream cells(row);
  std::string name, branches, ebits, cbits;
  cells >> name >> branches >> ebits >> cbits;
  EXPECT_EQ(name, "distributed-swap");
  EXPECT_EQ(branches, std::to_string(reports[0].branches_tested));
  EXPECT_EQ(ebits, "2");
  EXPECT_EQ(cbits, "4");
}

TEST(ReportTest, FailuresSerialized) {
  ProtocolReport r;
  r.name = "synthetic";
  r.failures.push_back({3, {1, 0, 1}, 0.25, "state differs from the oracle"});
  r.failure_count = 1;
  const auto j = Json::parse(render_report({r}, ReportFormat::kJson));
  EXPECT_EQ(j[0]["verified"], false);
  EXPECT_EQ(j[0]["failures"][0]["branch_bits"], Json::parse("[1,0,1]"));
  EXPECT_EQ(j[0]["failures"][0]["input"], 3);
  EXPECT_NE(render_report({r}, ReportFormat::kText).find("state differs"), std::string::npos);
}

TEST(ReportTest, FormatParsing) {
  EXPECT_EQ(parse_report_format("json"), ReportFormat::kJson);
  EXPECT_EQ(parse_report_format("text"), ReportFormat::kText);
  EXPECT_THROW(parse_report_format("xml"), ParameterError);
}

TEST(ReportTest, UnwritablePathIsIoError) {
  EXPECT_THROW(write_report({}, ReportFormat::kJson, "/nonexistent-dir/out.json"), IoError);
}

TEST(ReportTest, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "distq_report_test.json";
  write_report({}, ReportFormat::kJson, path.string());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), render_report({}, ReportFormat::kJson));
  std::filesystem::remove(path);
}

TEST(ReportTest, QftPlanJson) {
  const auto j = Json::parse(render_qft_plan(build_qft_plan(4, 2), ReportFormat::kJson));
  EXPECT_EQ(j["total_controlled"], 6);
  EXPECT_EQ(j["local_controlled"], 2);
  EXPECT_EQ(j["nonlocal_controlled"], 4);
}

}  // namespace
}  // namespace distq

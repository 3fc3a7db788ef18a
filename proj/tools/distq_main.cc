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

// distq: run protocol verification suites and emit resource/trace reports.
//
//   distq verify <protocol|all> [--branches exhaustive|N] [--seed S] [--inputs K]
//                [--n N --m M] [--format json|text] [--output PATH]
//   distq demo <protocol>       one seeded branch, text trace
//   distq report <protocol|all> like verify, one seeded branch per input
//   distq qft --n N --m M       the distributed QFT plan
//
// Exit status: 0 all verified, 1 verification failure, 2 usage or I/O error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "distq/errors.h"
#include "distq/qft.h"
#include "distq/report.h"
#include "distq/verify.h"

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string protocol;
  std::string branches = "exhaustive";
  std::uint64_t seed = 1;
  std::size_t inputs = 0;
  std::size_t n = 4;
  std::size_t m = 2;
  std::string format = "json";
  std::string output;
  bool corrupt_oracle = false;
};

distq::BranchSelection parse_branches(const std::string& text) {
  if (text == "exhaustive") return {true, 0};
  std::size_t used = 0;
  unsigned long long count = 0;
  try {
    count = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || count == 0) {
    throw distq::ParameterError("--branches takes 'exhaustive' or a positive count, got '" + text + "'");
  }
  return {false, static_cast<std::size_t>(count)};
}

void deliver(const std::string& text, const Options& opts) {
  if (opts.output.empty() || opts.output == "-") {
    std::cout << text;
  } else {
    distq::write_text_file(text, opts.output);
  }
}

int run_suites(const Options& opts, distq::BranchSelection branches, distq::ReportFormat format) {
  if (!distq::is_known_protocol(opts.protocol)) {
    std::cerr << "distq: unknown protocol '" << opts.protocol << "'; known:";
    for (const auto& p : distq::verifiable_protocols()) std::cerr << ' ' << p;
    std::cerr << " all\n";
    return kExitUsage;
  }
  distq::VerifyConfig config;
  config.branches = branches;
  config.seed = opts.seed;
  config.inputs = opts.inputs;
  config.qft_n = opts.n;
  config.qft_m = opts.m;
  config.corrupt_oracle = opts.corrupt_oracle;
  const auto reports = distq::run_verification(opts.protocol, config);
  deliver(distq::render_report(reports, format), opts);
  for (const auto& r : reports) {
    if (!r.verified) return kExitFailed;
  }
  return kExitVerified;
}

void add_common(CLI::App* cmd, Options& opts, bool with_branches) {
  cmd->add_option("protocol", opts.protocol, "Protocol suite name, or 'all'")->required();
  if (with_branches) cmd->add_option("--branches", opts.branches, "'exhaustive' or a sample count per input");
  cmd->add_option("--seed", opts.seed, "Seed for inputs and sampled branches");
  cmd->add_option("--inputs", opts.inputs, "Random inputs per suite (0 = suite default)");
  cmd->add_option("--n", opts.n, "QFT qubits");
  cmd->add_option("--m", opts.m, "QFT machines");
  cmd->add_option("--format", opts.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--output", opts.output, "Output path (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed quantum protocol simulator and verifier"};
  app.require_subcommand(1);
  Options opts;

  auto* verify = app.add_subcommand("verify", "Run a verification suite over forced measurement branches");
  add_common(verify, opts, true);
  // Hidden: makes every oracle wrong, to exercise the failure path.
  verify->add_flag("--corrupt-oracle", opts.corrupt_oracle)->group("");
  auto* report = app.add_subcommand("report", "Emit resource and message traces for one seeded branch per input");
  add_common(report, opts, false);
  auto* demo = app.add_subcommand("demo", "Run one seeded branch of a protocol and print a text trace");
  add_common(demo, opts, false);
  auto* qft = app.add_subcommand("qft", "Print the distributed QFT plan");
  qft->add_option("--n", opts.n, "QFT qubits");
  qft->add_option("--m", opts.m, "QFT machines");
  qft->add_option("--format", opts.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  qft->add_option("--output", opts.output, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitVerified : kExitUsage;
  }

  try {
    const auto format = distq::parse_report_format(opts.format);
    if (*verify) return run_suites(opts, parse_branches(opts.branches), format);
    if (*report) return run_suites(opts, {false, 1}, format);
    if (*demo) {
      if (opts.inputs == 0) opts.inputs = 1;
      opts.format = "text";
      return run_suites(opts, {false, 1}, distq::ReportFormat::kText);
    }
    if (*qft) {
      deliver(distq::render_qft_plan(distq::build_qft_plan(opts.n, opts.m), format), opts);
      return kExitVerified;
    }
  } catch (const distq::Error& e) {
    std::cerr << "distq: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

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

// Verification suites: every protocol is run on fresh networks over all (or a
// seeded sample of) forced measurement branches and compared with the
// monolithic gate it stands for.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "distq/network.h"

namespace distq {

struct BranchFailure {
  std::size_t input = 0;
  std::vector<int> branch_bits;
  double infidelity = 0.0;
  std::string detail;
};

struct ProtocolReport {
  std::string name;
  std::uint64_t branches_tested = 0;
  /// Cost of one run; identical on every branch or the report fails.
  ResourceLedger ledger;
  std::uint64_t rounds = 0;
  bool verified = false;
  double max_infidelity = 0.0;
  /// Messages of the first branch of the first input.
  std::vector<ClassicalMessage> message_log;
  std::vector<std::pair<std::string, ResourceLedger>> sections;
  /// Protocol-specific figures such as gate counts.
  std::vector<std::pair<std::string, std::int64_t>> metrics;
  /// At most kMaxStoredFailures entries; failure_count has the total.
  std::vector<BranchFailure> failures;
  std::uint64_t failure_count = 0;

  static constexpr std::size_t kMaxStoredFailures = 16;
};

struct BranchSelection {
  bool exhaustive = true;
  /// Branches per input in sampled mode.
  std::size_t samples = 0;
};

struct VerifyConfig {
  BranchSelection branches;
  std::uint64_t seed = 1;
  /// Random inputs per suite; 0 picks the suite's default.
  std::size_t inputs = 0;
  std::size_t qft_n = 4;
  std::size_t qft_m = 2;
  /// Exhaustive enumeration is refused above this many measurements.
  std::size_t max_exhaustive_measurements = 20;
  /// Testing aid: flip the first line of every oracle state so that every
  /// fidelity check must fail.
  bool corrupt_oracle = false;
};

/// Suite names accepted by run_verification, in canonical order ("all" runs
/// every one of them).
const std::vector<std::string>& verifiable_protocols();
bool is_known_protocol(const std::string& name);

/// Runs one suite (or "all"). Throws ParameterError for an unknown name or
/// an infeasible exhaustive request.
std::vector<ProtocolReport> run_verification(const std::string& protocol, const VerifyConfig& config);

}  // namespace distq

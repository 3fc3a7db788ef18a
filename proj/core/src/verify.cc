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

#include "distq/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>

#include "distq/errors.h"
#include "distq/gates.h"
#include "distq/primitives.h"
#include "distq/protocols.h"
#include "distq/qft.h"

namespace distq {
namespace {

constexpr double kProbabilityTolerance = 1e-9;

struct TrialResult {
  double infidelity = 0.0;
  ResourceLedger ledger;
  std::uint64_t rounds = 0;
  std::vector<ClassicalMessage> messages;
  std::vector<std::pair<std::string, ResourceLedger>> sections;
  std::size_t measurements = 0;
  double probability = 1.0;
  /// Non-empty when a post-condition other than fidelity failed.
  std::string failure;
};

using Trial = std::function<TrialResult(std::size_t input, OutcomeSource source)>;

struct ExpectedCost {
  std::uint64_t ebits = 0;
  std::uint64_t cbits = 0;
  std::optional<std::uint64_t> transported;
  std::optional<std::uint64_t> rounds;
};

std::mt19937_64 make_rng(std::uint64_t seed, const std::string& salt) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (char c : salt) words.push_back(static_cast<unsigned char>(c));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

std::string ledger_diff(const ResourceLedger& got, const ResourceLedger& want) {
  return "ledger " + got.to_string() + " differs from " + want.to_string();
}

void add_failure(ProtocolReport& report, BranchFailure failure) {
  ++report.failure_count;
  if (report.failures.size() < ProtocolReport::kMaxStoredFailures) report.failures.push_back(std::move(failure));
}

/// Bits of `mask` as forced outcomes, first measurement = most significant.
std::vector<int> mask_bits(std::uint64_t mask, std::size_t k) {
  std::vector<int> bits(k);
  for (std::size_t i = 0; i < k; ++i) bits[i] = static_cast<int>((mask >> (k - 1 - i)) & 1U);
  return bits;
}

ProtocolReport run_suite(const std::string& name, const VerifyConfig& config, std::size_t inputs,
                         const Trial& trial, const ExpectedCost& expected) {
  ProtocolReport report;
  report.name = name;
  auto sampler = make_rng(config.seed, name + "/branches");
  bool have_reference = false;
  std::optional<std::size_t> common_k;
  bool uniform_k = true;

  for (std::size_t input = 0; input < inputs; ++input) {
    // Probe run: all outcomes 0, only to count measurements.
    const std::size_t k = trial(input, OutcomeSource::forced({}, true)).measurements;
    if (common_k && *common_k != k) uniform_k = false;
    common_k = k;
    std::vector<std::uint64_t> masks;
    if (config.branches.exhaustive) {
      if (k > config.max_exhaustive_measurements) {
        throw ParameterError(name + " takes " + std::to_string(k) +
                             " measurements; exhaustive enumeration is capped at " +
                             std::to_string(config.max_exhaustive_measurements) +
                             ", use a sampled branch count");
      }
      masks.resize(std::uint64_t{1} << k);
      for (std::uint64_t m = 0; m < masks.size(); ++m) masks[m] = m;
    } else {
      const std::uint64_t limit = k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
      std::uniform_int_distribution<std::uint64_t> pick(0, limit);
      for (std::size_t s = 0; s < config.branches.samples; ++s) masks.push_back(pick(sampler));
    }

    double mass = 0.0;
    for (const std::uint64_t mask : masks) {
      const auto bits = mask_bits(mask, k);
      ++report.branches_tested;
      TrialResult r;
      try {
        r = trial(input, OutcomeSource::forced(bits));
      } catch (const Error& e) {
        add_failure(report, {input, bits, 1.0, e.what()});
        report.max_infidelity = std::max(report.max_infidelity, 1.0);
        continue;
      }
      mass += r.probability;
      if (!have_reference) {
        have_reference = true;
        report.ledger = r.ledger;
        report.rounds = r.rounds;
        report.message_log = r.messages;
        report.sections = r.sections;
      }
      report.max_infidelity = std::max(report.max_infidelity, r.infidelity);
      if (r.measurements != k) {
        add_failure(report, {input, bits, r.infidelity,
                             "branch took " + std::to_string(r.measurements) + " measurements, expected " +
                                 std::to_string(k)});
      } else if (r.infidelity > kTolerance) {
        add_failure(report, {input, bits, r.infidelity, "state differs from the oracle"});
      } else if (!r.failure.empty()) {
        add_failure(report, {input, bits, r.infidelity, r.failure});
      } else if (r.ledger != report.ledger || r.rounds != report.rounds) {
        add_failure(report, {input, bits, r.infidelity, ledger_diff(r.ledger, report.ledger)});
      }
    }
    if (config.branches.exhaustive && std::abs(mass - 1.0) > kProbabilityTolerance) {
      add_failure(report, {input, {}, 0.0, "branch probabilities sum to " + std::to_string(mass)});
    }
  }

  if (have_reference) {
    const ResourceLedger& l = report.ledger;
    std::string why;
    if (l.ebits_consumed != expected.ebits || l.cbits_sent != expected.cbits) {
      why = "expected " + std::to_string(expected.ebits) + " ebits and " + std::to_string(expected.cbits) +
            " cbits, got " + l.to_string();
    } else if (expected.transported && l.qubits_transported != *expected.transported) {
      why = "expected " + std::to_string(*expected.transported) + " transported qubits, got " + l.to_string();
    } else if (expected.rounds && report.rounds != *expected.rounds) {
      why = "expected " + std::to_string(*expected.rounds) + " rounds, got " + std::to_string(report.rounds);
    }
    if (!why.empty()) add_failure(report, {0, {}, 0.0, why});
  }
  if (common_k && uniform_k) {
    const std::uint64_t per_input = config.branches.exhaustive ? std::uint64_t{1} << *common_k
                                                               : config.branches.samples;
    report.metrics.emplace_back("measurements", static_cast<std::int64_t>(*common_k));
    report.metrics.emplace_back("branches_per_input", static_cast<std::int64_t>(per_input));
  }
  report.verified = report.failure_count == 0 && report.branches_tested > 0;
  return report;
}

// --- Shared trial plumbing -------------------------------------------------

/// Fidelity of the (definite-elsewhere) network state on `qubits` with
/// `expected`, as an infidelity.
double infidelity_on(const VerifyConfig& config, const Network& net, std::span<const QubitAddress> qubits,
                     const StateVector& expected) {
  const auto idx = net.global_indices(qubits);
  if (config.corrupt_oracle) {
    StateVector wrong = expected;
    wrong.apply(gates::pauli_x(), {0});
    return 1.0 - fidelity_up_to_global_phase(restrict_to(net.state(), idx), wrong);
  }
  return 1.0 - fidelity_up_to_global_phase(restrict_to(net.state(), idx), expected);
}

/// Empty string iff every channel qubit is |0> and unreserved.
std::string channel_hygiene(const Network& net) {
  for (const NodeId id : net.node_ids()) {
    for (const auto& q : net.channel_qubits(id)) {
      if (!net.is_zero(q)) return "channel qubit " + q.to_string() + " is not |0>";
      if (net.reserved(q)) return "channel qubit " + q.to_string() + " is still reserved";
    }
  }
  return {};
}

TrialResult collect(const Network& net, const ResourceLedger& setup, std::size_t log_start,
                    double infidelity, std::uint64_t rounds) {
  TrialResult r;
  r.infidelity = infidelity;
  r.ledger = net.ledger() - setup;
  r.rounds = rounds;
  const auto& log = net.message_log();
  r.messages.assign(log.begin() + static_cast<std::ptrdiff_t>(log_start), log.end());
  r.measurements = net.measurements_taken();
  r.probability = net.branch_probability();
  return r;
}

std::vector<StateVector> random_inputs(std::size_t count, std::size_t qubits, std::mt19937_64& rng) {
  std::vector<StateVector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(StateVector::random(qubits, rng));
  return out;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::size_t pick_inputs(const VerifyConfig& config, std::size_t fallback) {
  return config.inputs == 0 ? fallback : config.inputs;
}

// --- Suites ------------------------------------------------------------------

ProtocolReport verify_nonlocal_cnot(const VerifyConfig& config) {
  auto rng = make_rng(config.seed, "nonlocal-cnot");
  const auto inputs = random_inputs(pick_inputs(config, 10), 4, rng);
  const QubitAddress lines[] = {reg(0, 0), reg(0, 1), reg(1, 0), reg(1, 1)};
  Trial trial = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 2, 2}, {NodeId{1}, 2, 2}}, std::move(src));
    net.load_input(inputs[i], lines);
    establish_epr_pair(net, NodeId{0}, NodeId{1});
    const auto setup = net.ledger();
    const auto run = nonlocal_cnot(net, lines[0], lines[2]);
    const auto expected = apply_gate(inputs[i], gates::cnot(), std::vector<std::size_t>{0, 2});
    auto r = collect(net, setup, 0, infidelity_on(config, net, lines, expected), run.rounds);
    r.failure = channel_hygiene(net);
    return r;
  };
  return run_suite("nonlocal-cnot", config, inputs.size(), trial, {1, 2, 0, std::nullopt});
}

std::vector<ProtocolReport> verify_teleport(const VerifyConfig& config) {
  auto rng = make_rng(config.seed, "teleport");
  const auto inputs = random_inputs(pick_inputs(config, 10), 1, rng);
  std::vector<ProtocolReport> out;

  Trial plain = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 0, 2}}, std::move(src));
    net.load_input(inputs[i], {reg(0, 0)});
    const EprPair pair = establish_epr_pair(net, NodeId{0}, NodeId{1});
    net.take_pair(NodeId{0}, NodeId{1});
    const auto setup = net.ledger();
    teleport(net, reg(0, 0), pair);
    const QubitAddress dst[] = {pair.second};
    return collect(net, setup, 0, infidelity_on(config, net, dst, inputs[i]), (net.ledger() - setup).rounds);
  };
  out.push_back(run_suite("teleport", config, inputs.size(), plain, {1, 2, 0, std::nullopt}));

  Trial with_reset = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 1, 2}}, std::move(src));
    net.load_input(inputs[i], {reg(0, 0)});
    const EprPair pair = establish_epr_pair(net, NodeId{0}, NodeId{1});
    net.take_pair(NodeId{0}, NodeId{1});
    const auto setup = net.ledger();
    const auto run = teleport_with_reset(net, reg(0, 0), pair, reg(1, 0));
    const QubitAddress dst[] = {reg(1, 0)};
    auto r = collect(net, setup, 0, infidelity_on(config, net, dst, inputs[i]), run.rounds);
    r.failure = channel_hygiene(net);
    if (r.failure.empty() && !net.is_zero(reg(0, 0))) r.failure = "source qubit was not reset to |0>";
    return r;
  };
  out.push_back(run_suite("teleport-reset", config, inputs.size(), with_reset, {1, 2, 0, std::nullopt}));

  // A -> B into an empty register, then B -> A into the freed source slot.
  Trial ping_pong = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 1, 2}}, std::move(src));
    net.load_input(inputs[i], {reg(0, 0)});
    const auto setup = net.ledger();
    const ProtocolOptions establish{true};
    teleport_with_reset(net, reg(0, 0), acquire_pair(net, NodeId{0}, NodeId{1}, establish), reg(1, 0));
    teleport_with_reset(net, reg(1, 0), acquire_pair(net, NodeId{1}, NodeId{0}, establish), reg(0, 0));
    const QubitAddress dst[] = {reg(0, 0)};
    auto r = collect(net, setup, 0, infidelity_on(config, net, dst, inputs[i]), (net.ledger() - setup).rounds);
    r.failure = channel_hygiene(net);
    if (r.failure.empty() && !net.is_zero(reg(1, 0))) r.failure = "intermediate register was not reset";
    return r;
  };
  out.push_back(run_suite("teleport-ping-pong", config, inputs.size(), ping_pong, {2, 4, 4, std::nullopt}));
  return out;
}

std::vector<ProtocolReport> verify_cat_roundtrip(const VerifyConfig& config) {
  std::vector<ProtocolReport> out;
  for (std::size_t m = 2; m <= 4; ++m) {
    auto rng = make_rng(config.seed, "cat-roundtrip-m" + std::to_string(m));
    const auto states = random_inputs(pick_inputs(config, 5), 1, rng);
    // Every (state, kept member) combination is one input.
    Trial trial = [&, m](std::size_t i, OutcomeSource src) {
      const std::size_t keep_index = i % m;
      const StateVector& psi = states[i / m];
      std::vector<NodeSpec> spec{{NodeId{0}, 1, static_cast<int>(m)}};
      for (std::size_t n = 1; n < m; ++n) spec.push_back({NodeId{static_cast<int>(n)}, 0, 0, 1});
      Network net(spec, std::move(src));
      net.load_input(psi, {reg(0, 0)});
      std::vector<NodeId> nodes;
      for (std::size_t n = 0; n < m; ++n) nodes.push_back(NodeId{static_cast<int>(n)});
      const auto cat = establish_cat(net, nodes);
      const auto setup = net.ledger();
      const CatGroup group = cat_entangler(net, reg(0, 0), cat);
      const QubitAddress keep = group.members[keep_index];
      cat_disentangler(net, group, keep);
      const QubitAddress dst[] = {keep};
      return collect(net, setup, 0, infidelity_on(config, net, dst, psi), (net.ledger() - setup).rounds);
    };
    out.push_back(run_suite("cat-roundtrip-m" + std::to_string(m), config, states.size() * m, trial,
                            {m - 1, 2 * (m - 1), 0, std::nullopt}));
  }
  return out;
}

StateVector cat_state(std::size_t m) {
  std::vector<Complex> amps(std::size_t{1} << m);
  amps.front() = amps.back() = 1.0 / std::sqrt(2.0);
  return StateVector::from_amplitudes(std::move(amps));
}

std::size_t ceil_log2(std::size_t m) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < m) ++r;
  return r;
}

std::vector<ProtocolReport> verify_distributed_em(const VerifyConfig& config) {
  std::vector<ProtocolReport> out;
  for (const EmShape shape : {EmShape::kLinear, EmShape::kBinaryTree}) {
    const std::string shape_name = shape == EmShape::kLinear ? "linear" : "tree";
    for (std::size_t m = 2; m <= 5; ++m) {
      const auto demand = distributed_em_channel_demand(m, shape);
      Trial trial = [&, m, shape](std::size_t, OutcomeSource src) {
        std::vector<NodeSpec> spec;
        std::vector<QubitAddress> members;
        for (std::size_t n = 0; n < m; ++n) {
          spec.push_back({NodeId{static_cast<int>(n)}, 1, demand[n]});
          members.push_back(reg(static_cast<int>(n), 0));
        }
        Network net(spec, std::move(src));
        const auto run = distributed_em(net, members, shape);
        auto r = collect(net, {}, 0, infidelity_on(config, net, members, cat_state(m)), run.rounds);
        r.failure = channel_hygiene(net);
        return r;
      };
      const std::uint64_t rounds = shape == EmShape::kLinear ? m - 1 : ceil_log2(m);
      out.push_back(run_suite("distributed-em-" + shape_name + "-m" + std::to_string(m), config, 1, trial,
                              {m - 1, 2 * (m - 1), 2 * (m - 1), rounds}));
    }
  }

  // m = 8 is checked on the schedule and the local circuit only.
  ProtocolReport depth;
  depth.name = "distributed-em-depth-m8";
  const auto tree = em_schedule(8, EmShape::kBinaryTree).size();
  const auto linear = em_schedule(8, EmShape::kLinear).size();
  depth.metrics = {{"tree_rounds", static_cast<std::int64_t>(tree)},
                   {"linear_rounds", static_cast<std::int64_t>(linear)}};
  const auto qubits = iota(8);
  for (const EmShape shape : {EmShape::kLinear, EmShape::kBinaryTree}) {
    StateVector s(8);
    const auto d = local_entangle_em(s, qubits, shape);
    const double inf = 1.0 - fidelity_up_to_global_phase(s, cat_state(8));
    depth.max_infidelity = std::max(depth.max_infidelity, inf);
    if (inf > kTolerance) add_failure(depth, {0, {}, inf, "local E_8 does not produce the cat state"});
    if (d != (shape == EmShape::kLinear ? linear : tree)) add_failure(depth, {0, {}, 0.0, "depth mismatch"});
  }
  if (tree != 3 || linear != 7) add_failure(depth, {0, {}, 0.0, "expected 3 tree rounds and 7 linear rounds"});
  depth.rounds = tree;
  depth.verified = depth.failure_count == 0;
  out.push_back(depth);
  return out;
}

ProtocolReport verify_refresh_cycle(const VerifyConfig& config) {
  auto rng = make_rng(config.seed, "refresh-cycle");
  const auto inputs = random_inputs(pick_inputs(config, 5), 3, rng);
  const QubitAddress lines[] = {reg(0, 0), reg(1, 0), reg(1, 1)};
  Trial trial = [&](std::size_t i, OutcomeSource src) {
    // Exactly two channel qubits per node: the second gate only fits if the
    // first one's channel qubits were reset and released.
    Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 2, 2}}, std::move(src));
    net.load_input(inputs[i], lines);
    establish_epr_pair(net, NodeId{0}, NodeId{1});
    nonlocal_cnot(net, lines[0], lines[1]);
    std::string between = channel_hygiene(net);
    establish_epr_pair(net, NodeId{1}, NodeId{0});
    nonlocal_cnot(net, lines[2], lines[0]);
    StateVector expected = apply_gate(inputs[i], gates::cnot(), std::vector<std::size_t>{0, 1});
    expected.apply(gates::cnot(), {2, 0});
    auto r = collect(net, {}, 0, infidelity_on(config, net, lines, expected), net.ledger().rounds);
    r.failure = between.empty() ? channel_hygiene(net) : "after the first gate: " + between;
    return r;
  };
  return run_suite("refresh-cycle", config, inputs.size(), trial, {2, 4, 4, std::nullopt});
}

ProtocolReport verify_distributed_swap(const VerifyConfig& config) {
  auto rng = make_rng(config.seed, "distributed-swap");
  const auto inputs = random_inputs(pick_inputs(config, 5), 2, rng);
  const QubitAddress lines[] = {reg(0, 0), reg(1, 0)};
  Trial trial = [&](std::size_t i, OutcomeSource src) {
    // One register per node: no register could serve as an empty qubit.
    Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 1, 2}}, std::move(src));
    net.load_input(inputs[i], lines);
    const auto run = distributed_swap(net, lines[0], lines[1]);
    const auto expected = apply_gate(inputs[i], gates::swap(), std::vector<std::size_t>{0, 1});
    auto r = collect(net, {}, 0, infidelity_on(config, net, lines, expected), run.rounds);
    r.failure = channel_hygiene(net);
    return r;
  };
  auto report = run_suite("distributed-swap", config, inputs.size(), trial, {2, 4, 2, std::nullopt});
  report.metrics.emplace_back("register_empties_used", 0);
  return report;
}

std::vector<ProtocolReport> verify_mctrl_decompose(const VerifyConfig& config) {
  // 64 basis states, then random superpositions (these catch phase errors).
  auto rng = make_rng(config.seed, "mctrl-decompose");
  std::vector<StateVector> inputs;
  for (std::uint64_t b = 0; b < 64; ++b) inputs.push_back(StateVector::basis(6, b));
  for (auto& s : random_inputs(pick_inputs(config, 5), 6, rng)) inputs.push_back(std::move(s));
  // Line order: c1 c2 c3 c4 ancilla target.
  const GateMatrix c4x = add_controls(gates::pauli_x(), 4);
  const std::vector<std::size_t> oracle_targets{0, 1, 2, 3, 5};
  std::vector<ProtocolReport> out;

  const QubitAddress local_lines[] = {reg(0, 0), reg(0, 1), reg(0, 2), reg(0, 3), reg(0, 4), reg(0, 5)};
  Trial local = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 6, 0}}, std::move(src));
    net.load_input(inputs[i], local_lines);
    const auto run = decompose_multi_control_x(
        net, std::span<const QubitAddress>(local_lines, 4), local_lines[4], local_lines[5]);
    return collect(net, {}, 0, infidelity_on(config, net, local_lines, apply_gate(inputs[i], c4x, oracle_targets)),
                   run.rounds);
  };
  out.push_back(run_suite("mctrl-decompose-local", config, inputs.size(), local, {0, 0, 0, std::nullopt}));

  // c1, c2, ancilla on the top node; c3, c4, target on the bottom node.
  const QubitAddress dist_lines[] = {reg(0, 0), reg(0, 1), reg(1, 0), reg(1, 1), reg(0, 2), reg(1, 2)};
  Trial distributed = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 3, 2}, {NodeId{1}, 3, 2}}, std::move(src));
    net.load_input(inputs[i], dist_lines);
    establish_epr_pair(net, NodeId{0}, NodeId{1});
    const auto setup = net.ledger();
    const auto run = decompose_multi_control_x(
        net, std::span<const QubitAddress>(dist_lines, 4), dist_lines[4], dist_lines[5]);
    auto r = collect(net, setup, 0,
                     infidelity_on(config, net, dist_lines, apply_gate(inputs[i], c4x, oracle_targets)), run.rounds);
    r.failure = channel_hygiene(net);
    return r;
  };
  out.push_back(run_suite("mctrl-decompose-distributed", config, inputs.size(), distributed, {1, 2, 0, std::nullopt}));
  return out;
}

/// Random constituents on two target lines: one-qubit unitaries and CNOTs.
/// Also returns their product embedded on (t0, t1).
std::pair<std::vector<TargetedGate>, GateMatrix> random_sequence(std::size_t k, const QubitAddress& t0,
                                                                  const QubitAddress& t1, std::mt19937_64& rng) {
  std::vector<TargetedGate> seq;
  GateMatrix product = gates::identity(2);
  for (std::size_t g = 0; g < k; ++g) {
    switch (g % 3) {
      case 0: {
        const GateMatrix u = gates::random_unitary(1, rng);
        seq.push_back({u, {t0}});
        product = u.tensor(gates::identity1()) * product;
        break;
      }
      case 1:
        seq.push_back({gates::cnot(), {t0, t1}});
        product = gates::cnot() * product;
        break;
      default: {
        const GateMatrix u = gates::random_unitary(1, rng);
        seq.push_back({u, {t1}});
        product = gates::identity1().tensor(u) * product;
        break;
      }
    }
  }
  return {seq, product};
}

std::vector<ProtocolReport> verify_controlled_sequence(const VerifyConfig& config) {
  std::vector<ProtocolReport> out;
  const QubitAddress lines[] = {reg(0, 0), reg(1, 0), reg(1, 1)};
  for (const std::size_t k : {1, 2, 5, 10}) {
    const std::string name = "controlled-sequence-k" + std::to_string(k);
    auto rng = make_rng(config.seed, name);
    const auto [seq, product] = random_sequence(k, lines[1], lines[2], rng);
    const GateMatrix oracle = add_controls(product, 1);
    const auto inputs = random_inputs(pick_inputs(config, 5), 3, rng);
    Trial trial = [&](std::size_t i, OutcomeSource src) {
      Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 2, 2}}, std::move(src));
      net.load_input(inputs[i], lines);
      establish_epr_pair(net, NodeId{0}, NodeId{1});
      const auto setup = net.ledger();
      const auto run = nonlocal_controlled_sequence(net, lines[0], seq);
      auto r = collect(net, setup, 0, infidelity_on(config, net, lines, apply_gate(inputs[i], oracle, iota(3))), run.rounds);
      r.failure = channel_hygiene(net);
      return r;
    };
    auto report = run_suite(name, config, inputs.size(), trial, {1, 2, 0, std::nullopt});
    report.metrics.emplace_back("gates", static_cast<std::int64_t>(k));
    out.push_back(std::move(report));
  }
  return out;
}

ProtocolReport verify_parallel_control(const VerifyConfig& config) {
  auto rng = make_rng(config.seed, "parallel-control");
  const GateMatrix u1 = gates::random_unitary(2, rng);
  const GateMatrix u2 = gates::random_unitary(3, rng);
  const GateMatrix u3 = gates::random_unitary(2, rng);
  const GateMatrix oracle = add_controls(u1.tensor(u2).tensor(u3), 1);
  const auto inputs = random_inputs(pick_inputs(config, 5), 8, rng);

  const std::vector<QubitAddress> lines{reg(0, 0), reg(1, 0), reg(1, 1), reg(2, 0), reg(2, 1),
                                        reg(2, 2), reg(3, 0), reg(3, 1)};
  const std::vector<LocalPart> parts{{NodeId{1}, u1, {reg(1, 0), reg(1, 1)}},
                                     {NodeId{2}, u2, {reg(2, 0), reg(2, 1), reg(2, 2)}},
                                     {NodeId{3}, u3, {reg(3, 0), reg(3, 1)}}};
  const std::vector<NodeId> nodes{NodeId{0}, NodeId{1}, NodeId{2}, NodeId{3}};

  Trial trial = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 1, 4}, {NodeId{1}, 2, 0, 1}, {NodeId{2}, 3, 0, 1}, {NodeId{3}, 2, 0, 1}},
                std::move(src));
    net.load_input(inputs[i], lines);
    const auto cat = establish_cat(net, nodes);
    const auto setup = net.ledger();
    const auto run = parallel_distributed_control(net, lines[0], parts, cat);
    auto r = collect(net, setup, 0, infidelity_on(config, net, lines, apply_gate(inputs[i], oracle, iota(8))), run.rounds);
    r.sections = run.sections;
    r.failure = channel_hygiene(net);
    return r;
  };
  auto report = run_suite("parallel-control", config, inputs.size(), trial, {3, 6, 0, 1});

  // The same parts as three separate non-local controlled gates.
  Network seq({{NodeId{0}, 1, 2}, {NodeId{1}, 2, 1}, {NodeId{2}, 3, 1}, {NodeId{3}, 2, 1}},
              OutcomeSource::forced({}, true));
  seq.load_input(inputs.front(), lines);
  std::uint64_t sequential_rounds = 0;
  for (const auto& p : parts) {
    const TargetedGate g{p.gate, p.targets};
    const auto run = nonlocal_controlled_sequence(seq, lines[0], std::span(&g, 1), ProtocolOptions{true});
    sequential_rounds += run.sections.front().second.rounds;
  }
  const double seq_inf = infidelity_on(config, seq, lines, apply_gate(inputs.front(), oracle, iota(8)));
  report.metrics.emplace_back("controlled_rounds", static_cast<std::int64_t>(report.rounds));
  report.metrics.emplace_back("sequential_rounds", static_cast<std::int64_t>(sequential_rounds));
  if (sequential_rounds != parts.size() || seq_inf > kTolerance) {
    add_failure(report, {0, {}, seq_inf, "sequential comparison expected " + std::to_string(parts.size()) +
                                             " rounds, got " + std::to_string(sequential_rounds)});
    report.verified = false;
  }
  return report;
}

ProtocolReport verify_multi_control(const VerifyConfig& config) {
  auto rng = make_rng(config.seed, "multi-control");
  const auto inputs = random_inputs(pick_inputs(config, 5), 3, rng);
  const QubitAddress lines[] = {reg(0, 0), reg(1, 0), reg(2, 0)};
  Trial trial = [&](std::size_t i, OutcomeSource src) {
    Network net({{NodeId{0}, 1, 1}, {NodeId{1}, 1, 1}, {NodeId{2}, 3, 2}}, std::move(src));
    net.load_input(inputs[i], lines);
    MultiControlOptions opts;
    opts.auto_establish = true;
    opts.workspace = {reg(2, 1), reg(2, 2)};
    const auto run = nonlocal_multi_control(net, std::span<const QubitAddress>(lines, 2), gates::pauli_x(),
                                            lines[2], opts);
    auto r = collect(net, {}, 0, infidelity_on(config, net, lines, apply_gate(inputs[i], gates::toffoli(), iota(3))),
                     run.rounds);
    r.failure = channel_hygiene(net);
    if (r.failure.empty() && !(net.is_zero(reg(2, 1)) && net.is_zero(reg(2, 2)))) {
      r.failure = "workspace qubits were not reset";
    }
    return r;
  };
  return run_suite("multi-control", config, inputs.size(), trial, {2, 4, 4, std::nullopt});
}

ProtocolReport verify_epr_exchange(const VerifyConfig& config) {
  Trial trial = [&](std::size_t, OutcomeSource src) {
    Network net({{NodeId{0}, 0, 4}, {NodeId{1}, 0, 4}}, std::move(src));
    std::vector<EprPair> pairs;
    for (int rep = 0; rep < 2; ++rep) {
      for (const auto& p : establish_epr_exchange(net, NodeId{0}, NodeId{1})) pairs.push_back(p);
    }
    auto r = collect(net, {}, 0, 0.0, net.ledger().rounds);
    for (const auto& p : pairs) {
      const std::size_t idx[] = {net.global_index(p.first), net.global_index(p.second)};
      if (p.first.node == p.second.node || !is_cat_state(net.state(), idx)) {
        r.failure = "pair " + p.first.to_string() + " / " + p.second.to_string() + " is not a cross-node EPR pair";
      }
    }
    return r;
  };
  auto report = run_suite("epr-exchange", config, 1, trial, {0, 0, 4, std::nullopt});
  report.metrics.emplace_back("pairs", 4);
  return report;
}

ProtocolReport verify_qft(const VerifyConfig& config) {
  const QftPlan plan = build_qft_plan(config.qft_n, config.qft_m);
  const std::string name = "qft-n" + std::to_string(plan.n) + "-m" + std::to_string(plan.m);
  auto rng = make_rng(config.seed, name);
  const auto inputs = random_inputs(pick_inputs(config, config.branches.exhaustive ? 1 : 3), plan.n, rng);
  std::vector<QubitAddress> lines;
  for (std::size_t i = 0; i < plan.n; ++i) lines.push_back(qft_qubit_address(plan, i));
  const auto logical = iota(plan.n);
  std::vector<StateVector> expected;
  for (const auto& in : inputs) expected.push_back(qft_local(in, logical));

  Trial trial = [&](std::size_t i, OutcomeSource src) {
    Network net(qft_network_spec(plan), std::move(src));
    net.load_input(inputs[i], lines);
    const auto run = qft_distributed(net, plan);
    auto r = collect(net, {}, 0, infidelity_on(config, net, lines, expected[i]), run.rounds);
    r.sections = run.sections;
    r.failure = channel_hygiene(net);
    return r;
  };
  const std::uint64_t ebits = plan.nonlocal_controlled + 2 * plan.cross_node_swaps;
  auto report = run_suite(name, config, inputs.size(), trial, {ebits, 2 * ebits, std::nullopt, std::nullopt});

  // Comparison mode on one branch.
  Network amortized(qft_network_spec(plan), OutcomeSource::forced({}, true));
  amortized.load_input(inputs.front(), lines);
  const auto arun = qft_distributed(amortized, plan, QftOptions{true});
  const double ainf = infidelity_on(config, amortized, lines, expected.front());
  const std::uint64_t rotation_ebits = arun.sections.front().second.ebits_consumed;

  report.metrics.insert(report.metrics.end(), {
      {"total_controlled", static_cast<std::int64_t>(plan.total_controlled)},
      {"local_controlled", static_cast<std::int64_t>(plan.local_controlled)},
      {"nonlocal_controlled", static_cast<std::int64_t>(plan.nonlocal_controlled)},
      {"amortized_distributions", static_cast<std::int64_t>(plan.amortized_distributions)},
      {"amortized_rotation_ebits", static_cast<std::int64_t>(rotation_ebits)},
      {"cross_node_swaps", static_cast<std::int64_t>(plan.cross_node_swaps)},
  });
  std::string why;
  if (plan.total_controlled != qft_total_controlled(plan.n) ||
      plan.local_controlled != qft_local_controlled(plan.n, plan.m) ||
      plan.nonlocal_controlled != qft_nonlocal_controlled(plan.n, plan.m)) {
    why = "gate counts differ from the closed forms";
  } else if (ainf > kTolerance) {
    why = "amortized schedule differs from the oracle";
  } else if (rotation_ebits != plan.amortized_distributions) {
    why = "amortized schedule used " + std::to_string(rotation_ebits) + " ebits, plan says " +
          std::to_string(plan.amortized_distributions);
  }
  if (!why.empty()) {
    add_failure(report, {0, {}, ainf, why});
    report.verified = false;
  }
  return report;
}

const std::map<std::string, std::function<std::vector<ProtocolReport>(const VerifyConfig&)>>& registry() {
  static const std::map<std::string, std::function<std::vector<ProtocolReport>(const VerifyConfig&)>> r{
      {"nonlocal-cnot", [](const VerifyConfig& c) { return std::vector{verify_nonlocal_cnot(c)}; }},
      {"teleport", verify_teleport},
      {"cat-roundtrip", verify_cat_roundtrip},
      {"distributed-em", verify_distributed_em},
      {"refresh-cycle", [](const VerifyConfig& c) { return std::vector{verify_refresh_cycle(c)}; }},
      {"distributed-swap", [](const VerifyConfig& c) { return std::vector{verify_distributed_swap(c)}; }},
      {"mctrl-decompose", verify_mctrl_decompose},
      {"controlled-sequence", verify_controlled_sequence},
      {"parallel-control", [](const VerifyConfig& c) { return std::vector{verify_parallel_control(c)}; }},
      {"multi-control", [](const VerifyConfig& c) { return std::vector{verify_multi_control(c)}; }},
      {"epr-exchange", [](const VerifyConfig& c) { return std::vector{verify_epr_exchange(c)}; }},
      {"qft", [](const VerifyConfig& c) { return std::vector{verify_qft(c)}; }},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& verifiable_protocols() {
  static const std::vector<std::string> names{
      "nonlocal-cnot",   "teleport",         "cat-roundtrip",       "distributed-em",
      "refresh-cycle",   "distributed-swap", "mctrl-decompose",     "controlled-sequence",
      "parallel-control", "multi-control",   "epr-exchange",        "qft"};
  return names;
}

bool is_known_protocol(const std::string& name) { return name == "all" || registry().count(name) > 0; }

std::vector<ProtocolReport> run_verification(const std::string& protocol, const VerifyConfig& config) {
  if (!config.branches.exhaustive && config.branches.samples == 0) {
    throw ParameterError("sampled mode needs at least one branch");
  }
  if (protocol == "all") {
    std::vector<ProtocolReport> all;
    for (const auto& name : verifiable_protocols()) {
      auto part = registry().at(name)(config);
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
  }
  const auto it = registry().find(protocol);
  if (it == registry().end()) throw ParameterError("unknown protocol '" + protocol + "'");
  return it->second(config);
}

}  // namespace distq

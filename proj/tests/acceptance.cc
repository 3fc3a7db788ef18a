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

// Acceptance suite: one PASS/FAIL line per acceptance criterion. Oracles are
// built here from explicit matrices and permutations, not from the library's
// own verification harness.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "distq/gates.h"
#include "distq/primitives.h"
#include "distq/protocols.h"
#include "distq/qft.h"
#include "test_support.h"

namespace distq {
namespace {

using testing::Dense;

constexpr double kFidelityFloor = 1.0 - 1e-10;

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && first_.empty()) first_ = what;
    ok_ = ok_ && ok;
  }
  void fidelity(double f, const std::string& what) {
    worst_ = std::min(worst_, f);
    expect(f >= kFidelityFloor, what + " (fidelity " + std::to_string(f) + ")");
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  bool ok() const { return ok_; }
  std::string summary() const {
    std::ostringstream s;
    s << notes_;
    if (worst_ < 1.0) s << (notes_.empty() ? "" : ", ") << "min fidelity 1-" << std::scientific << (1.0 - worst_);
    if (!first_.empty()) s << "; first failure: " << first_;
    return s.str();
  }

 private:
  bool ok_ = true;
  double worst_ = 1.0;
  std::string first_;
  std::string notes_;
};

/// Enumerates every forced-outcome branch of `body` and checks that branch
/// probabilities sum to one.
std::size_t all_branches(Check& c, const std::function<Network(OutcomeSource)>& body) {
  const std::size_t k = body(OutcomeSource::forced({}, true)).measurements_taken();
  double mass = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> bits(k);
    for (std::size_t i = 0; i < k; ++i) bits[i] = static_cast<int>((mask >> (k - 1 - i)) & 1U);
    try {
      mass += body(OutcomeSource::forced(bits)).branch_probability();
    } catch (const std::exception& e) {
      c.expect(false, std::string("branch raised: ") + e.what());
    }
  }
  c.expect(std::abs(mass - 1.0) < 1e-9, "branch probabilities sum to " + std::to_string(mass));
  return std::size_t{1} << k;
}

bool channels_clean(const Network& net) {
  for (const NodeId id : net.node_ids())
    for (const auto& q : net.channel_qubits(id))
      if (!net.is_zero(q) || net.reserved(q)) return false;
  return true;
}

bool ledger_is(const ResourceLedger& l, std::uint64_t ebits, std::uint64_t cbits) {
  return l.ebits_consumed == ebits && l.cbits_sent == cbits;
}

StateVector cat_like(Complex a, Complex b, std::size_t m) {
  std::vector<Complex> v(std::size_t{1} << m);
  v.front() = a;
  v.back() = b;
  return StateVector::from_amplitudes(v);
}

Dense controlled_dense(const Dense& u) {
  const std::size_t half = u.size();
  Dense out(2 * half, std::vector<Complex>(2 * half));
  for (std::size_t i = 0; i < half; ++i) out[i][i] = 1.0;
  for (std::size_t r = 0; r < half; ++r)
    for (std::size_t c = 0; c < half; ++c) out[half + r][half + c] = u[r][c];
  return out;
}

// |c t> -> |c, t xor c> on qubits (c, t) of n.
Dense cnot_perm(std::size_t c, std::size_t t, std::size_t n) {
  return testing::permutation(n, [=](std::uint64_t x) { return testing::bit(x, c, n) ? testing::flip(x, t, n) : x; });
}

// --- Criteria ------------------------------------------------------------------

void criterion_nonlocal_cnot(Check& c) {
  std::mt19937_64 rng(1001);
  const QubitAddress lines[] = {reg(0, 0), reg(0, 1), reg(1, 0), reg(1, 1)};
  const Dense oracle = cnot_perm(0, 2, 4);
  std::size_t branches = 0;
  for (int i = 0; i < 10; ++i) {
    const auto psi = StateVector::random(4, rng);
    const auto want = testing::times(oracle, psi);
    branches += all_branches(c, [&](OutcomeSource src) {
      Network net({{NodeId{0}, 2, 2}, {NodeId{1}, 2, 2}}, std::move(src));
      net.load_input(psi, lines);
      establish_epr_pair(net, NodeId{0}, NodeId{1});
      const auto run = nonlocal_cnot(net, lines[0], lines[2]);
      c.fidelity(testing::fidelity_on(net, lines, want), "non-local CNOT output");
      c.expect(ledger_is(run.ledger, 1, 2), "ledger " + run.ledger.to_string());
      return net;
    });
  }
  c.expect(branches == 40, "expected 4 branches per input");
  c.note(std::to_string(branches) + " branches, ledger (1 ebit, 2 cbits)");
}

void criterion_teleport(Check& c) {
  std::mt19937_64 rng(1002);
  std::size_t branches = 0;
  for (int i = 0; i < 10; ++i) {
    const auto psi = StateVector::random(1, rng);
    branches += all_branches(c, [&](OutcomeSource src) {
      Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 0, 2}}, std::move(src));
      net.load_input(psi, {reg(0, 0)});
      const auto pair = establish_epr_pair(net, NodeId{0}, NodeId{1});
      net.take_pair(NodeId{0}, NodeId{1});
      const auto before = net.ledger();
      teleport(net, reg(0, 0), pair);
      c.fidelity(testing::fidelity_on(net, {pair.second}, psi), "teleported state");
      c.expect(ledger_is(net.ledger() - before, 1, 2), "teleport ledger");
      return net;
    });
    all_branches(c, [&](OutcomeSource src) {
      Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 1, 2}}, std::move(src));
      net.load_input(psi, {reg(0, 0)});
      const auto pair = establish_epr_pair(net, NodeId{0}, NodeId{1});
      net.take_pair(NodeId{0}, NodeId{1});
      teleport_with_reset(net, reg(0, 0), pair, reg(1, 0));
      c.fidelity(testing::fidelity_on(net, {reg(1, 0)}, psi), "teleport with reset");
      c.expect(net.is_zero(reg(0, 0)), "source not reset to |0>");
      c.expect(channels_clean(net), "channel qubits not reset");
      return net;
    });
    // A -> B -> A, the second leg landing in the freed source slot.
    all_branches(c, [&](OutcomeSource src) {
      Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 1, 2}}, std::move(src));
      net.load_input(psi, {reg(0, 0)});
      const ProtocolOptions establish{true};
      teleport_with_reset(net, reg(0, 0), acquire_pair(net, NodeId{0}, NodeId{1}, establish), reg(1, 0));
      teleport_with_reset(net, reg(1, 0), acquire_pair(net, NodeId{1}, NodeId{0}, establish), reg(0, 0));
      c.fidelity(testing::fidelity_on(net, {reg(0, 0)}, psi), "ping-pong");
      c.expect(channels_clean(net) && net.is_zero(reg(1, 0)), "ping-pong left dirty qubits");
      return net;
    });
  }
  c.note(std::to_string(branches) + " plain branches, reset and ping-pong variants");
}

void criterion_cat_round_trip(Check& c) {
  std::mt19937_64 rng(1003);
  std::size_t runs = 0;
  for (int i = 0; i < 5; ++i) {
    const auto psi = StateVector::random(1, rng);
    for (std::size_t m = 2; m <= 4; ++m) {
      for (std::size_t keep = 0; keep < m; ++keep) {
        runs += all_branches(c, [&](OutcomeSource src) {
          std::vector<NodeSpec> spec{{NodeId{0}, 1, static_cast<int>(m)}};
          std::vector<NodeId> ids{NodeId{0}};
          for (std::size_t n = 1; n < m; ++n) {
            spec.push_back({NodeId{static_cast<int>(n)}, 0, 0, 1});
            ids.push_back(NodeId{static_cast<int>(n)});
          }
          Network net(spec, std::move(src));
          net.load_input(psi, {reg(0, 0)});
          const auto group = cat_entangler(net, reg(0, 0), establish_cat(net, ids));
          c.fidelity(testing::fidelity_on(net, group.members, cat_like(psi[0], psi[1], m)), "cat-like state");
          const auto target = group.members[keep];
          cat_disentangler(net, group, target);
          c.fidelity(testing::fidelity_on(net, {target}, psi), "restored control");
          return net;
        });
      }
    }
  }
  c.note(std::to_string(runs) + " branches over m in {2,3,4} and every kept member");
}

void criterion_ghz(Check& c) {
  for (const EmShape shape : {EmShape::kLinear, EmShape::kBinaryTree}) {
    for (std::size_t m = 2; m <= 5; ++m) {
      std::vector<Complex> amps(std::size_t{1} << m);
      amps.front() = amps.back() = 1.0 / std::numbers::sqrt2;
      const auto ghz = StateVector::from_amplitudes(amps);
      std::size_t want_rounds = shape == EmShape::kLinear ? m - 1 : 0;
      while (shape == EmShape::kBinaryTree && (std::size_t{1} << want_rounds) < m) ++want_rounds;
      const auto demand = distributed_em_channel_demand(m, shape);
      all_branches(c, [&](OutcomeSource src) {
        std::vector<NodeSpec> spec;
        std::vector<QubitAddress> members;
        for (std::size_t n = 0; n < m; ++n) {
          spec.push_back({NodeId{static_cast<int>(n)}, 1, demand[n]});
          members.push_back(reg(static_cast<int>(n), 0));
        }
        Network net(spec, std::move(src));
        const auto run = distributed_em(net, members, shape);
        c.fidelity(testing::fidelity_on(net, members, ghz), "GHZ m=" + std::to_string(m));
        c.expect(run.ledger.ebits_consumed == m - 1, "ebits for m=" + std::to_string(m));
        c.expect(run.rounds == want_rounds, "rounds for m=" + std::to_string(m));
        c.expect(channels_clean(net), "channels after E_m");
        return net;
      });
    }
  }
  // m = 8 on the schedule and the local circuit.
  const auto tree = em_schedule(8, EmShape::kBinaryTree).size();
  const auto linear = em_schedule(8, EmShape::kLinear).size();
  c.expect(tree == 3 && linear == 7, "m=8 depths " + std::to_string(tree) + "/" + std::to_string(linear));
  for (const EmShape shape : {EmShape::kLinear, EmShape::kBinaryTree}) {
    StateVector s(8);
    const std::size_t q[] = {0, 1, 2, 3, 4, 5, 6, 7};
    local_entangle_em(s, q, shape);
    c.fidelity(std::abs(s[0] + s[255]) / std::sqrt(2.0), "local E_8");
  }
  c.note("m=2..5 both shapes, m=8 tree/linear rounds " + std::to_string(tree) + "/" + std::to_string(linear));
}

void criterion_refresh(Check& c) {
  std::mt19937_64 rng(1005);
  const QubitAddress lines[] = {reg(0, 0), reg(1, 0), reg(1, 1)};
  const Dense oracle = testing::multiply(cnot_perm(2, 0, 3), cnot_perm(0, 1, 3));
  std::size_t branches = 0;
  for (int i = 0; i < 5; ++i) {
    const auto psi = StateVector::random(3, rng);
    const auto want = testing::times(oracle, psi);
    const auto first = testing::times(cnot_perm(0, 1, 3), psi);
    branches += all_branches(c, [&](OutcomeSource src) {
      Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 2, 2}}, std::move(src));
      net.load_input(psi, lines);
      establish_epr_pair(net, NodeId{0}, NodeId{1});
      nonlocal_cnot(net, lines[0], lines[1]);
      c.fidelity(testing::fidelity_on(net, lines, first), "first gate");
      c.expect(channels_clean(net), "channels between cycles");
      establish_epr_pair(net, NodeId{1}, NodeId{0});
      nonlocal_cnot(net, lines[2], lines[0]);
      c.fidelity(testing::fidelity_on(net, lines, want), "second gate");
      c.expect(channels_clean(net), "channels after the second cycle");
      return net;
    });
  }
  c.note(std::to_string(branches) + " branches");
}

void criterion_swap(Check& c) {
  std::mt19937_64 rng(1006);
  const QubitAddress lines[] = {reg(0, 0), reg(1, 0)};
  const Dense oracle = testing::permutation(2, [](std::uint64_t x) { return ((x & 1U) << 1) | (x >> 1); });
  std::size_t branches = 0;
  for (int i = 0; i < 5; ++i) {
    const auto psi = StateVector::random(2, rng);
    const auto want = testing::times(oracle, psi);
    branches += all_branches(c, [&](OutcomeSource src) {
      // One register each: there is no register that could serve as an empty.
      Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 1, 2}}, std::move(src));
      net.load_input(psi, lines);
      const auto run = distributed_swap(net, lines[0], lines[1]);
      c.fidelity(testing::fidelity_on(net, lines, want), "swapped pair");
      c.expect(ledger_is(run.ledger, 2, 4), "swap ledger " + run.ledger.to_string());
      c.expect(channels_clean(net), "channels after swap");
      return net;
    });
  }
  c.expect(branches == 80, "expected 16 branches per input");
  c.note(std::to_string(branches) + " branches, ledger (2, 4), no register empties");
}

void criterion_c4x(Check& c) {
  // Lines c1 c2 c3 c4 a t; t flips iff all four controls are 1, a untouched.
  const Dense oracle = testing::permutation(6, [](std::uint64_t x) {
    for (std::size_t q = 0; q < 4; ++q)
      if (!testing::bit(x, q, 6)) return x;
    return testing::flip(x, 5, 6);
  });
  const QubitAddress local[] = {reg(0, 0), reg(0, 1), reg(0, 2), reg(0, 3), reg(0, 4), reg(0, 5)};
  const QubitAddress dist[] = {reg(0, 0), reg(0, 1), reg(1, 0), reg(1, 1), reg(0, 2), reg(1, 2)};
  std::mt19937_64 rng(1007);
  std::vector<StateVector> inputs;
  for (std::uint64_t b = 0; b < 64; ++b) inputs.push_back(StateVector::basis(6, b));
  for (int i = 0; i < 5; ++i) inputs.push_back(StateVector::random(6, rng));
  for (const auto& psi : inputs) {
    const auto want = testing::times(oracle, psi);
    Network net({{NodeId{0}, 6, 0}});
    net.load_input(psi, local);
    decompose_multi_control_x(net, std::span<const QubitAddress>(local, 4), local[4], local[5]);
    c.fidelity(testing::fidelity_on(net, local, want), "local decomposition");
    all_branches(c, [&](OutcomeSource src) {
      Network dnet({{NodeId{0}, 3, 2}, {NodeId{1}, 3, 2}}, std::move(src));
      dnet.load_input(psi, dist);
      establish_epr_pair(dnet, NodeId{0}, NodeId{1});
      const auto run = decompose_multi_control_x(dnet, std::span<const QubitAddress>(dist, 4), dist[4], dist[5]);
      c.fidelity(testing::fidelity_on(dnet, dist, want), "distributed decomposition");
      c.expect(ledger_is(run.ledger, 1, 2), "distributed ledger " + run.ledger.to_string());
      c.expect(channels_clean(dnet), "channels after decomposition");
      return dnet;
    });
  }
  c.note("64 basis states + 5 superpositions, local and distributed (1 ebit, 2 cbits)");
}

void criterion_amortization(Check& c) {
  std::mt19937_64 rng(1008);
  const QubitAddress lines[] = {reg(0, 0), reg(1, 0), reg(1, 1)};
  for (const std::size_t k : {1, 2, 5, 10}) {
    std::vector<TargetedGate> seq;
    Dense u = testing::dense_identity(4);
    for (std::size_t g = 0; g < k; ++g) {
      if (g % 3 == 1) {
        seq.push_back({gates::cnot(), {lines[1], lines[2]}});
        u = testing::multiply(cnot_perm(0, 1, 2), u);
      } else {
        const auto v = gates::random_unitary(1, rng);
        const std::size_t line = g % 3 == 0 ? 0 : 1;
        seq.push_back({v, {lines[1 + line]}});
        u = testing::multiply(testing::embed(v, {line}, 2), u);
      }
    }
    const Dense oracle = controlled_dense(u);
    for (int i = 0; i < 3; ++i) {
      const auto psi = StateVector::random(3, rng);
      const auto want = testing::times(oracle, psi);
      all_branches(c, [&](OutcomeSource src) {
        Network net({{NodeId{0}, 1, 2}, {NodeId{1}, 2, 2}}, std::move(src));
        net.load_input(psi, lines);
        establish_epr_pair(net, NodeId{0}, NodeId{1});
        const auto run = nonlocal_controlled_sequence(net, lines[0], seq);
        c.fidelity(testing::fidelity_on(net, lines, want), "controlled sequence k=" + std::to_string(k));
        c.expect(ledger_is(run.ledger, 1, 2), "k=" + std::to_string(k) + " ledger " + run.ledger.to_string());
        return net;
      });
    }
  }
  c.note("k in {1,2,5,10} each (1 ebit, 2 cbits)");
}

void criterion_parallel(Check& c) {
  std::mt19937_64 rng(1009);
  const auto u1 = gates::random_unitary(2, rng);
  const auto u2 = gates::random_unitary(3, rng);
  const auto u3 = gates::random_unitary(2, rng);
  const Dense oracle = controlled_dense(testing::multiply(
      testing::embed(u3, {5, 6}, 7), testing::multiply(testing::embed(u2, {2, 3, 4}, 7), testing::embed(u1, {0, 1}, 7))));
  const std::vector<QubitAddress> lines{reg(0, 0), reg(1, 0), reg(1, 1), reg(2, 0), reg(2, 1), reg(2, 2), reg(3, 0), reg(3, 1)};
  const std::vector<LocalPart> parts{{NodeId{1}, u1, {reg(1, 0), reg(1, 1)}},
                                     {NodeId{2}, u2, {reg(2, 0), reg(2, 1), reg(2, 2)}},
                                     {NodeId{3}, u3, {reg(3, 0), reg(3, 1)}}};
  const std::vector<NodeId> nodes{NodeId{0}, NodeId{1}, NodeId{2}, NodeId{3}};
  std::uint64_t parallel_rounds = 0;
  for (int i = 0; i < 3; ++i) {
    const auto psi = StateVector::random(8, rng);
    const auto want = testing::times(oracle, psi);
    all_branches(c, [&](OutcomeSource src) {
      Network net({{NodeId{0}, 1, 4}, {NodeId{1}, 2, 0, 1}, {NodeId{2}, 3, 0, 1}, {NodeId{3}, 2, 0, 1}}, std::move(src));
      net.load_input(psi, lines);
      const auto cat = establish_cat(net, nodes);
      const auto run = parallel_distributed_control(net, lines[0], parts, cat);
      parallel_rounds = run.rounds;
      c.fidelity(testing::fidelity_on(net, lines, want), "parallel control");
      c.expect(run.rounds == 1, "controlled section took " + std::to_string(run.rounds) + " rounds");
      return net;
    });
    // Sequential comparison: each part as its own non-local controlled gate.
    Network seq({{NodeId{0}, 1, 2}, {NodeId{1}, 2, 1}, {NodeId{2}, 3, 1}, {NodeId{3}, 2, 1}}, OutcomeSource::seeded(i));
    seq.load_input(psi, lines);
    std::uint64_t sequential = 0;
    for (const auto& p : parts) {
      const TargetedGate g{p.gate, p.targets};
      const auto run = nonlocal_controlled_sequence(seq, lines[0], std::span(&g, 1), ProtocolOptions{true});
      for (const auto& [name, l] : run.sections)
        if (name == "controlled-section") sequential += l.rounds;
    }
    c.fidelity(testing::fidelity_on(seq, lines, want), "sequential control");
    c.expect(sequential == 3, "sequential controlled rounds " + std::to_string(sequential));
  }
  c.note("controlled section " + std::to_string(parallel_rounds) + " round vs 3 sequential");
}

Dense dft(std::size_t n) {
  const std::size_t d = std::size_t{1} << n;
  Dense m(d, std::vector<Complex>(d));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j)
      m[k][j] = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                           2.0 * std::numbers::pi * static_cast<double>((j * k) % d) / static_cast<double>(d));
  return m;
}

void criterion_qft(Check& c) {
  std::mt19937_64 rng(1010);
  struct Case {
    std::size_t n, m, inputs, samples;  // samples == 0: exhaustive
  };
  double n6_seconds = 0.0;
  std::size_t n4_branches = 0;
  for (const Case& k : {Case{4, 2, 2, 0}, Case{6, 2, 3, 200}, Case{6, 3, 3, 200}}) {
    const auto start = std::chrono::steady_clock::now();
    const auto plan = build_qft_plan(k.n, k.m);
    std::size_t total = 0, nonlocal = 0;
    for (const auto& s : plan.schedule)
      if (s.kind == QftStep::Kind::kControlledPhase) {
        ++total;
        nonlocal += s.a / plan.k != s.b / plan.k;
      }
    c.expect(total == k.n * (k.n - 1) / 2, "total controlled gates");
    c.expect(total - nonlocal == k.m * plan.k * (plan.k - 1) / 2, "local controlled gates");
    c.expect(nonlocal == plan.nonlocal_controlled, "plan non-local count");
    if (k.n == 4) c.expect(total == 6 && total - nonlocal == 2 && nonlocal == 4, "n=4 m=2 counts 6/2/4");

    const Dense oracle = dft(k.n);
    std::vector<QubitAddress> lines;
    for (std::size_t i = 0; i < k.n; ++i) lines.push_back(qft_qubit_address(plan, i));
    const std::uint64_t ebits = nonlocal + 2 * plan.cross_node_swaps;
    for (std::size_t i = 0; i < k.inputs; ++i) {
      const auto psi = StateVector::random(k.n, rng);
      const auto want = testing::times(oracle, psi);
      auto body = [&](OutcomeSource src) {
        Network net(qft_network_spec(plan), std::move(src));
        net.load_input(psi, lines);
        const auto run = qft_distributed(net, plan);
        c.fidelity(testing::fidelity_on(net, lines, want), "QFT n=" + std::to_string(k.n) + " m=" + std::to_string(k.m));
        c.expect(run.ledger.ebits_consumed == ebits, "QFT ebits " + run.ledger.to_string());
        for (const auto& [name, l] : run.sections)
          if (name == "controlled_rotations") c.expect(l.ebits_consumed == nonlocal, "rotation ebits");
        c.expect(channels_clean(net), "channels after QFT");
        return net;
      };
      if (k.samples == 0) {
        n4_branches += all_branches(c, body);
      } else {
        const std::size_t measurements = body(OutcomeSource::forced({}, true)).measurements_taken();
        std::uniform_int_distribution<int> coin(0, 1);
        for (std::size_t s = 0; s < k.samples; ++s) {
          std::vector<int> bits(measurements);
          for (auto& b : bits) b = coin(rng);
          body(OutcomeSource::forced(bits));
        }
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (k.n == 6) n6_seconds += secs;
  }
  c.expect(n6_seconds < 60.0, "n=6 runtime " + std::to_string(n6_seconds) + " s");
  std::ostringstream s;
  s << "n=4 exhaustive " << n4_branches << " branches, n=6 600 sampled branches per shape in " << std::fixed
    << std::setprecision(1) << n6_seconds << " s";
  c.note(s.str());
}

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DISTQ_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

void criterion_cli(Check& c) {
  const std::vector<std::string> commands{
      "verify nonlocal-cnot",        "verify teleport",
      "verify cat-roundtrip",        "verify distributed-em",
      "verify refresh-cycle",        "verify distributed-swap",
      "verify mctrl-decompose",      "verify controlled-sequence",
      "verify parallel-control",     "verify qft --n 4 --m 2",
      "verify qft --n 6 --m 2 --branches 200", "verify qft --n 6 --m 3 --branches 200"};
  for (const auto& cmd : commands) {
    const auto a = run_cli(cmd + " --seed 7");
    const auto b = run_cli(cmd + " --seed 7");
    c.expect(a.status == 0 && b.status == 0, "'" + cmd + "' exited " + std::to_string(a.status));
    c.expect(a.out == b.out, "'" + cmd + "' output differs between runs");
    c.expect(!a.out.empty(), "'" + cmd + "' printed nothing");
  }
  c.note(std::to_string(commands.size()) + " commands run twice, byte-identical");
}

}  // namespace
}  // namespace distq

int main() {
  struct Criterion {
    int id;
    const char* title;
    void (*run)(distq::Check&);
    double limit_seconds;  // 0: no runtime bound
  };
  const Criterion criteria[] = {
      {1, "non-local CNOT equivalence", distq::criterion_nonlocal_cnot, 1.0},
      {2, "teleportation", distq::criterion_teleport, 1.0},
      {3, "cat-entangler/disentangler round trip", distq::criterion_cat_round_trip, 0.0},
      {4, "GHZ construction", distq::criterion_ghz, 0.0},
      {5, "entanglement refresh cycle", distq::criterion_refresh, 0.0},
      {6, "distributed swap", distq::criterion_swap, 0.0},
      {7, "wedge_4(X) decomposition", distq::criterion_c4x, 0.0},
      {8, "amortized controlled sequence", distq::criterion_amortization, 0.0},
      {9, "parallel control", distq::criterion_parallel, 0.0},
      {10, "distributed QFT", distq::criterion_qft, 0.0},
      {11, "CLI determinism", distq::criterion_cli, 0.0},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    distq::Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0.0) check.expect(secs < cr.limit_seconds, "runtime " + std::to_string(secs) + " s");
    std::printf("%s  criterion %2d  %-40s %7.2f s  %s\n", check.ok() ? "PASS" : "FAIL", cr.id, cr.title, secs,
                check.summary().c_str());
    std::fflush(stdout);
    if (!check.ok()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}

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

#include "distq/qft.h"

#include <set>
#include <string>

#include "distq/errors.h"
#include "distq/gates.h"

namespace distq {
namespace {

/// Cascade for n qubits in application order, without placement.
std::vector<QftStep> cascade(std::size_t n) {
  std::vector<QftStep> steps;
  for (std::size_t i = 0; i < n; ++i) {
    steps.push_back({QftStep::Kind::kHadamard, i, i, 0, false});
    for (std::size_t j = 2; j <= n - i; ++j) {
      steps.push_back({QftStep::Kind::kControlledPhase, i, i + j - 1, static_cast<int>(j), false});
    }
  }
  for (std::size_t i = 0; i < n / 2; ++i) steps.push_back({QftStep::Kind::kSwap, i, n - 1 - i, 0, false});
  return steps;
}

void apply_step(StateVector& state, const QftStep& s, std::span<const std::size_t> q, bool inverse) {
  switch (s.kind) {
    case QftStep::Kind::kHadamard:
      state.apply(gates::hadamard(), {q[s.a]});
      break;
    case QftStep::Kind::kControlledPhase: {
      const GateMatrix rk = make_rk(s.k);
      state.apply(add_controls(inverse ? rk.adjoint() : rk, 1), {q[s.b], q[s.a]});
      break;
    }
    case QftStep::Kind::kSwap:
      state.apply(gates::swap(), {q[s.a], q[s.b]});
      break;
  }
}

void check_qubits(const StateVector& state, std::span<const std::size_t> qubits) {
  std::set<std::size_t> seen;
  for (const auto q : qubits) {
    if (q >= state.num_qubits()) throw AddressError("qubit " + std::to_string(q) + " out of range");
    if (!seen.insert(q).second) throw AddressError("duplicate qubit " + std::to_string(q));
  }
}

}  // namespace

std::size_t qft_total_controlled(std::size_t n) { return n * (n - 1) / 2; }

std::size_t qft_local_controlled(std::size_t n, std::size_t m) {
  const std::size_t k = n / m;
  return m * k * (k - 1) / 2;
}

std::size_t qft_nonlocal_controlled(std::size_t n, std::size_t m) {
  return qft_total_controlled(n) - qft_local_controlled(n, m);
}

QftPlan build_qft_plan(std::size_t n, std::size_t m) {
  if (n == 0) throw ParameterError("QFT needs at least one qubit");
  if (m == 0 || n % m != 0) {
    throw ParameterError("machine count " + std::to_string(m) + " does not divide " + std::to_string(n));
  }
  QftPlan plan;
  plan.n = n;
  plan.m = m;
  plan.k = n / m;
  plan.schedule = cascade(n);

  const QftStep* prev = nullptr;
  for (auto& s : plan.schedule) {
    s.nonlocal = s.kind != QftStep::Kind::kHadamard && plan.machine_of(s.a) != plan.machine_of(s.b);
    if (s.kind == QftStep::Kind::kControlledPhase) {
      ++plan.total_controlled;
      if (!s.nonlocal) {
        ++plan.local_controlled;
      } else {
        ++plan.nonlocal_controlled;
        const bool joins = prev != nullptr && prev->kind == QftStep::Kind::kControlledPhase &&
                           prev->nonlocal && prev->a == s.a &&
                           plan.machine_of(prev->b) == plan.machine_of(s.b);
        if (!joins) ++plan.amortized_distributions;
      }
    } else if (s.kind == QftStep::Kind::kSwap) {
      ++plan.swaps;
      if (s.nonlocal) ++plan.cross_node_swaps;
    }
    prev = &s;
  }
  return plan;
}

StateVector qft_local(StateVector state, std::span<const std::size_t> qubits) {
  check_qubits(state, qubits);
  for (const auto& s : cascade(qubits.size())) apply_step(state, s, qubits, false);
  return state;
}

StateVector inverse_qft_local(StateVector state, std::span<const std::size_t> qubits) {
  check_qubits(state, qubits);
  const auto steps = cascade(qubits.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) apply_step(state, *it, qubits, true);
  return state;
}

QubitAddress qft_qubit_address(const QftPlan& plan, std::size_t i) {
  return reg(static_cast<int>(i / plan.k), static_cast<int>(i % plan.k));
}

std::vector<NodeSpec> qft_network_spec(const QftPlan& plan) {
  std::vector<NodeSpec> spec;
  for (std::size_t node = 0; node < plan.m; ++node) {
    spec.push_back({NodeId{static_cast<int>(node)}, static_cast<int>(plan.k), 2, 2});
  }
  return spec;
}

ProtocolRun qft_distributed(Network& net, const QftPlan& plan, const QftOptions& opts) {
  for (std::size_t node = 0; node < plan.m; ++node) {
    const NodeSpec& spec = net.node(NodeId{static_cast<int>(node)});
    if (spec.register_qubits < static_cast<int>(plan.k)) {
      throw CapacityError("node " + std::to_string(node) + " has fewer than k register qubits");
    }
    if (plan.m > 1 && net.channel_qubits(spec.id).size() < 2) {
      throw CapacityError("node " + std::to_string(node) + " needs two channel qubits");
    }
  }

  const ResourceLedger start = net.ledger();
  const std::size_t log_start = net.message_log().size();
  const ProtocolOptions establish{true};
  ResourceLedger rotations;
  ResourceLedger swaps;
  auto addr = [&](std::size_t i) { return qft_qubit_address(plan, i); };

  const auto& steps = plan.schedule;
  for (std::size_t idx = 0; idx < steps.size(); ++idx) {
    const QftStep& s = steps[idx];
    const ResourceLedger before = net.ledger();
    switch (s.kind) {
      case QftStep::Kind::kHadamard:
        net.local_apply(gates::hadamard(), {addr(s.a)});
        rotations += net.ledger() - before;
        break;
      case QftStep::Kind::kControlledPhase: {
        if (!s.nonlocal) {
          net.local_apply(add_controls(make_rk(s.k), 1), {addr(s.b), addr(s.a)});
        } else if (!opts.amortize) {
          const TargetedGate g{make_rk(s.k), {addr(s.a)}};
          nonlocal_controlled_sequence(net, addr(s.b), std::span(&g, 1), establish);
        } else {
          // Distribute the target line once for the whole run of gates whose
          // other qubit lives on the same remote machine.
          std::vector<TargetedGate> run{{make_rk(s.k), {addr(s.b)}}};
          while (idx + 1 < steps.size()) {
            const QftStep& next = steps[idx + 1];
            if (next.kind != QftStep::Kind::kControlledPhase || !next.nonlocal || next.a != s.a ||
                plan.machine_of(next.b) != plan.machine_of(s.b)) {
              break;
            }
            run.push_back({make_rk(next.k), {addr(next.b)}});
            ++idx;
          }
          nonlocal_controlled_sequence(net, addr(s.a), run, establish);
        }
        rotations += net.ledger() - before;
        break;
      }
      case QftStep::Kind::kSwap:
        if (s.nonlocal) {
          distributed_swap(net, addr(s.a), addr(s.b));
        } else {
          net.local_apply(gates::swap(), {addr(s.a), addr(s.b)});
        }
        swaps += net.ledger() - before;
        break;
    }
  }

  ProtocolRun run;
  run.name = opts.amortize ? "qft-amortized" : "qft";
  run.ledger = net.ledger() - start;
  run.rounds = run.ledger.rounds;
  const auto& log = net.message_log();
  run.messages.assign(log.begin() + static_cast<std::ptrdiff_t>(log_start), log.end());
  run.sections.emplace_back("controlled_rotations", rotations);
  run.sections.emplace_back("swaps", swaps);
  return run;
}

}  // namespace distq

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

// Quantum Fourier transform: the local H / controlled-R_j cascade and a
// distributed version over m machines holding k = n/m qubits each.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "distq/network.h"
#include "distq/protocols.h"
#include "distq/state_vector.h"

namespace distq {

struct QftStep {
  enum class Kind { kHadamard, kControlledPhase, kSwap };
  Kind kind = Kind::kHadamard;
  /// Hadamard: the qubit. Controlled phase: the target. Swap: the lower qubit.
  std::size_t a = 0;
  /// Controlled phase: the control. Swap: the upper qubit. Unused for H.
  std::size_t b = 0;
  /// R_k index of a controlled phase.
  int k = 0;
  /// Set when the step's qubits live on different machines.
  bool nonlocal = false;
};

struct QftPlan {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::vector<QftStep> schedule;

  std::size_t total_controlled = 0;
  std::size_t local_controlled = 0;
  std::size_t nonlocal_controlled = 0;
  /// Distributions needed when adjacent gates sharing a target with controls
  /// on one remote machine reuse a single distributed line.
  std::size_t amortized_distributions = 0;
  std::size_t swaps = 0;
  std::size_t cross_node_swaps = 0;

  std::size_t machine_of(std::size_t qubit) const { return qubit / k; }
};

/// Closed forms for the controlled-gate counts.
std::size_t qft_total_controlled(std::size_t n);
std::size_t qft_local_controlled(std::size_t n, std::size_t m);
std::size_t qft_nonlocal_controlled(std::size_t n, std::size_t m);

/// The cascade for n qubits over m machines; qubit i lives on machine i / k.
/// Throws ParameterError unless 1 <= m, m divides n and n >= 1.
QftPlan build_qft_plan(std::size_t n, std::size_t m);

/// Applies the QFT to `qubits` (qubits[0] is the most significant bit of j).
StateVector qft_local(StateVector state, std::span<const std::size_t> qubits);
/// The conjugate-transpose schedule.
StateVector inverse_qft_local(StateVector state, std::span<const std::size_t> qubits);

/// Register qubit holding QFT qubit i.
QubitAddress qft_qubit_address(const QftPlan& plan, std::size_t i);
/// A network shape that fits the plan: m nodes with k registers and two
/// channel qubits each.
std::vector<NodeSpec> qft_network_spec(const QftPlan& plan);

struct QftOptions {
  /// Reuse one distributed line for adjacent gates that share a target and
  /// whose controls sit on one remote machine (the controlled phase is
  /// symmetric, so the target can act as the distributed control).
  bool amortize = false;
};

/// Runs the plan on `net`: local gates directly, non-local controlled-R gates
/// through nonlocal_controlled_sequence and cross-node swaps through
/// distributed_swap, establishing entanglement on demand. Sections
/// "controlled_rotations" and "swaps" split the ledger.
ProtocolRun qft_distributed(Network& net, const QftPlan& plan, const QftOptions& opts = {});

}  // namespace distq

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
//
// Composite protocols built from the entangler/disentangler primitives:
// entanglement establishment and refresh, non-local controlled gates,
// distributed GHZ construction, teleportation with channel reset and the
// distributed swap.
//
// Every protocol returns a ProtocolRun whose ledger is the difference between
// the network ledger after and before the call.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "distq/gates.h"
#include "distq/network.h"
#include "distq/primitives.h"

namespace distq {

struct ProtocolRun {
  std::string name;
  ResourceLedger ledger;
  /// Protocol-defined depth; see each operation. Defaults to ledger.rounds.
  std::uint64_t rounds = 0;
  std::vector<ClassicalMessage> messages;
  /// Optional named sub-ledgers (e.g. the controlled section of a protocol).
  std::vector<std::pair<std::string, ResourceLedger>> sections;
};

struct ProtocolOptions {
  /// Establish missing EPR pairs on demand instead of raising ResourceError.
  /// Transport costs show up in ledger.qubits_transported.
  bool auto_establish = false;
};

// --- Establishing and refreshing entanglement --------------------------------

/// Each node entangles two of its free channel qubits and the nodes exchange
/// one qubit of their pair: two EPR pairs for two transported qubits. The pairs
/// are registered with the network.
std::array<EprPair, 2> establish_epr_exchange(Network& net, NodeId a, NodeId b);

/// One EPR pair for two transports: `initiator` entangles two of its free
/// channel qubits and exchanges one of them for a free channel qubit of `peer`.
/// The pair is registered with `first` on `initiator`.
EprPair establish_epr_pair(Network& net, NodeId initiator, NodeId peer);

/// Builds an m-fold cat state by entangling m free channel qubits on nodes[0]
/// locally and transporting one to each other node (m-1 transports). The
/// returned members are ordered like `nodes`.
std::vector<QubitAddress> establish_cat(Network& net, std::span<const NodeId> nodes);

/// Returns a pair between a and b (first on a): a registered one, or a freshly
/// established one when `opts.auto_establish` is set.
EprPair acquire_pair(Network& net, NodeId a, NodeId b, const ProtocolOptions& opts);

/// Uses each record to flip its (measured) channel qubit back to |0> with a
/// classically controlled X, then releases the qubit for re-use. Throws
/// CannotResetError if a qubit is not in the basis state its record claims.
void reset_channel_qubits(Network& net, std::span<const MeasurementRecord> records);

// --- Non-local controlled gates -------------------------------------------

/// CNOT between qubits on different nodes: entangler, local CNOT from the
/// remote cat member, disentangler back onto the control, channel reset.
/// Costs one ebit and two cbits.
ProtocolRun nonlocal_cnot(Network& net, const QubitAddress& control, const QubitAddress& target,
                          const ProtocolOptions& opts = {});

struct TargetedGate {
  GateMatrix gate;
  std::vector<QubitAddress> targets;
};

/// wedge_1(U_k ... U_2 U_1) where `gates` are listed in application order and
/// all act on one remote node. The control is distributed once, so the whole
/// sequence costs one ebit and two cbits whatever its length.
ProtocolRun nonlocal_controlled_sequence(Network& net, const QubitAddress& control,
                                         std::span<const TargetedGate> gates,
                                         const ProtocolOptions& opts = {});

struct LocalPart {
  NodeId node;
  GateMatrix gate;
  std::vector<QubitAddress> targets;
};

/// wedge_1(U_1 ⊗ ... ⊗ U_p) with U_i on `parts[i].node`. `cat` must hold a
/// (p+1)-fold cat state whose first member sits on the control's node and whose
/// member i+1 sits on parts[i].node; when empty and `opts.auto_establish` is
/// set it is built with establish_cat. All controlled parts run in one
/// parallel batch; `rounds` reports the depth of that controlled section.
ProtocolRun parallel_distributed_control(Network& net, const QubitAddress& control,
                                         std::span<const LocalPart> parts,
                                         std::span<const QubitAddress> cat = {},
                                         const ProtocolOptions& opts = {});

// --- Distributed GHZ --------------------------------------------------------

/// Prepares the m-fold cat state on `members` (one qubit per node, all |0>) by
/// running the E_m schedule with every CNOT replaced by a non-local CNOT.
/// All m-1 EPR pairs are established up front, so a node needs one channel
/// qubit per incident schedule edge (plus one spare while it initiates its
/// edge towards an earlier node). Throws CapacityError before touching the
/// state if a node is short. `rounds` is the number of non-local CNOT layers.
ProtocolRun distributed_em(Network& net, std::span<const QubitAddress> members, EmShape shape);

/// Channel qubits each node needs for distributed_em with the given shape.
std::vector<int> distributed_em_channel_demand(std::size_t m, EmShape shape);

// --- Teleportation and swap -----------------------------------------------

/// Teleports `source` through `epr`, then swaps the received state from
/// epr.second into `empty` (a |0> register qubit on the receiving node) and
/// resets source and both channel qubits to |0>.
ProtocolRun teleport_with_reset(Network& net, const QubitAddress& source, const EprPair& epr,
                                const QubitAddress& empty);

struct SwapOptions {
  bool auto_establish = true;
  /// Register qubit in |0> on b's node, required only when the nodes cannot
  /// provide two channel qubits each.
  std::optional<QubitAddress> empty;
};

/// Exchanges the states of `a` and `b` with two teleportations. With two
/// channel qubits per node the receiving channel qubits act as swap buffers
/// and no register empties are needed. Two ebits and four cbits.
ProtocolRun distributed_swap(Network& net, const QubitAddress& a, const QubitAddress& b,
                             const SwapOptions& opts = {});

// --- Multi-controlled gates -------------------------------------------------

struct MultiControlOptions {
  bool auto_establish = false;
  /// |0> register qubits on the target's node, one per remote control. When
  /// given, each distributed control line is swapped out of its channel qubit
  /// so the channel qubit is free again before the controlled gate runs.
  std::vector<QubitAddress> workspace;
};

/// wedge_m(base) with controls on arbitrary nodes: every remote control is
/// distributed to the target's node through its own cat-like pair and the
/// gate runs locally. m ebits and 2m cbits for m remote controls.
ProtocolRun nonlocal_multi_control(Network& net, std::span<const QubitAddress> controls,
                                   const GateMatrix& base, const QubitAddress& target,
                                   const MultiControlOptions& opts = {});

/// wedge_4(X) on a six-line register (controls c1..c4, borrowed ancilla a,
/// target t) from two wedge_2 and wedge_3 stages; the ancilla may hold any
/// state and is restored.
///
/// If all six lines live on one node the gate runs locally as
/// wedge_2(c1,c2;a) wedge_3(c3,c4,a;t) wedge_2(c1,c2;a) wedge_3(c3,c4,a;t).
/// If c1, c2 and a share one node and c3, c4, t share another, line a is
/// distributed once: its value is folded into the local half of an EPR pair
/// before and after the first wedge_2, so the remote half carries c1 AND c2
/// and a single remote wedge_3 completes the gate (one ebit, two cbits).
/// Any other placement or a wrong number of controls is a ParameterError.
ProtocolRun decompose_multi_control_x(Network& net, std::span<const QubitAddress> controls,
                                      const QubitAddress& ancilla, const QubitAddress& target,
                                      const ProtocolOptions& opts = {});

}  // namespace distq

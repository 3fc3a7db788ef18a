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
// The distributed-machine model. One StateVector spans every node; locality
// is enforced by this API rather than by the math: multi-qubit gates must stay
// on one node, classical control needs the bit to be present at the node, and
// qubits move between nodes only through explicit transports.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "distq/state_vector.h"

namespace distq {

struct NodeId {
  int value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class Pool { kRegister, kChannel };

struct QubitAddress {
  NodeId node;
  Pool pool = Pool::kRegister;
  int slot = 0;

  friend auto operator<=>(const QubitAddress&, const QubitAddress&) = default;
  std::string to_string() const;
};

inline QubitAddress reg(int node, int slot) { return {NodeId{node}, Pool::kRegister, slot}; }
inline QubitAddress chan(int node, int slot) { return {NodeId{node}, Pool::kChannel, slot}; }

struct NodeSpec {
  NodeId id;
  int register_qubits = 0;
  /// Channel qubits physically present at construction.
  int channel_qubits = 0;
  /// Channel slots available; a negative value means "equal to channel_qubits".
  int channel_slots = -1;
};

/// Handle to a classical bit produced by a measurement or a local XOR.
struct ClassicalBit {
  std::size_t id = 0;
  int value = 0;
};

struct MeasurementRecord {
  QubitAddress address;
  int outcome = 0;
  /// Born probability of the outcome before collapse.
  double probability = 0.0;
  ClassicalBit bit;
};

struct ClassicalMessage {
  NodeId from;
  std::vector<NodeId> to;
  int bit = 0;
  std::string tag;
};

struct ResourceLedger {
  std::uint64_t ebits_consumed = 0;
  std::uint64_t cbits_sent = 0;
  std::uint64_t qubits_transported = 0;
  std::uint64_t rounds = 0;

  friend bool operator==(const ResourceLedger&, const ResourceLedger&) = default;
  /// Component-wise difference; `rhs` must be an earlier snapshot.
  ResourceLedger operator-(const ResourceLedger& rhs) const;
  ResourceLedger& operator+=(const ResourceLedger& rhs);
  std::string to_string() const;
};

/// Where measurement outcomes come from: a seeded generator (Born sampling)
/// or a forced bit sequence consumed in measurement order.
class OutcomeSource {
 public:
  static OutcomeSource seeded(std::uint64_t seed);
  /// When `pad_with_zero` is set, measurements beyond the sequence are forced
  /// to 0 instead of raising ParameterError.
  static OutcomeSource forced(std::vector<int> bits, bool pad_with_zero = false);

  MeasureResult measure(StateVector& state, std::size_t qubit);
  std::size_t consumed() const { return consumed_; }

 private:
  OutcomeSource() = default;

  bool forced_ = false;
  bool pad_ = false;
  std::vector<int> bits_;
  std::mt19937_64 rng_;
  std::size_t consumed_ = 0;
};

/// Two channel qubits on different nodes sharing (|00> + |11>)/sqrt(2).
struct EprPair {
  QubitAddress first;
  QubitAddress second;
};

class Network {
 public:
  explicit Network(std::vector<NodeSpec> nodes,
                   OutcomeSource source = OutcomeSource::seeded(0));

  // --- Queries ------------------------------------------------------------
  const StateVector& state() const { return state_; }
  std::size_t num_qubits() const { return state_.num_qubits(); }
  std::size_t global_index(const QubitAddress& address) const;
  std::vector<std::size_t> global_indices(std::span<const QubitAddress> addresses) const;
  QubitAddress address_of(std::size_t global) const;
  const NodeSpec& node(NodeId id) const;
  std::vector<NodeId> node_ids() const;
  /// Occupied channel slots of a node, in slot order.
  std::vector<QubitAddress> channel_qubits(NodeId id) const;
  /// Occupied, unreserved channel qubits currently in |0>.
  std::vector<QubitAddress> free_channel_qubits(NodeId id) const;
  int vacant_channel_slots(NodeId id) const;
  bool is_zero(const QubitAddress& address) const;

  const ResourceLedger& ledger() const { return ledger_; }
  const std::vector<ClassicalMessage>& message_log() const { return log_; }
  std::size_t measurements_taken() const { return source_.consumed(); }
  /// Product of the Born probabilities of every measurement so far.
  double branch_probability() const { return branch_probability_; }

  /// Throws ValidationError if the address <-> qubit map is not a bijection
  /// or a capacity is exceeded.
  void check_ownership() const;

  // --- Input preparation --------------------------------------------------
  /// Places `input` on `qubits` (qubits[0] is its most significant qubit).
  /// Only valid while the whole network is still |0...0>; costs nothing.
  void load_input(const StateVector& input, std::span<const QubitAddress> qubits);
  void load_input(const StateVector& input, std::initializer_list<QubitAddress> qubits) {
    load_input(input, std::span<const QubitAddress>(qubits.begin(), qubits.size()));
  }

  // --- Quantum operations -------------------------------------------------
  /// Throws LocalityError unless every target lives on one node.
  void local_apply(const GateMatrix& gate, std::span<const QubitAddress> targets);
  void local_apply(const GateMatrix& gate, std::initializer_list<QubitAddress> targets) {
    local_apply(gate, std::span<const QubitAddress>(targets.begin(), targets.size()));
  }

  MeasurementRecord measure(const QubitAddress& address);

  /// Moves a channel qubit to a vacant channel slot of `to_node`.
  QubitAddress transport_qubit(const QubitAddress& from, NodeId to_node);

  /// Swaps ownership of two channel qubits on different nodes: each is sent
  /// to the other's slot (two transports, no vacant slot needed).
  void exchange_channel_qubits(const QubitAddress& a, const QubitAddress& b);

  // --- Classical layer ----------------------------------------------------
  /// Logs the message and charges one cbit per destination other than
  /// `from`. Throws CausalityError if `from` does not hold the bit.
  void send_cbit(const ClassicalBit& bit, NodeId from, std::vector<NodeId> to, std::string tag);

  /// XOR of bits already available at `at`; the result is available there.
  ClassicalBit xor_bits(NodeId at, std::span<const ClassicalBit> bits);
  bool bit_available(const ClassicalBit& bit, NodeId at) const;

  /// Applies `gate` iff bit = 1. Throws CausalityError unless the bit has been
  /// measured at or delivered to the targets' node.
  void classically_controlled_apply(const ClassicalBit& bit, const GateMatrix& gate,
                                    std::span<const QubitAddress> targets);
  void classically_controlled_apply(const ClassicalBit& bit, const GateMatrix& gate,
                                    std::initializer_list<QubitAddress> targets) {
    classically_controlled_apply(bit, gate,
                                 std::span<const QubitAddress>(targets.begin(), targets.size()));
  }

  // --- Entanglement bookkeeping ---------------------------------------------
  void register_pair(const EprPair& pair);
  /// Removes and returns an established pair between the two nodes, ordered
  /// so that `first` lives on `a`.
  std::optional<EprPair> take_pair(NodeId a, NodeId b);
  std::size_t pairs_available(NodeId a, NodeId b) const;

  /// Reserved channel qubits are never reported as free.
  void reserve(const QubitAddress& address);
  /// Un-reserves a channel qubit; throws CannotResetError unless it is |0>.
  void release(const QubitAddress& address);
  bool reserved(const QubitAddress& address) const;

  void charge_ebits(std::uint64_t count) { ledger_.ebits_consumed += count; }

  // --- Scheduling ---------------------------------------------------------
  /// Operations between begin_batch and end_batch must touch pairwise-disjoint
  /// qubits and together cost one round. Outside a batch each gate, measurement
  /// or classically controlled gate costs one round. Batches nest; only the
  /// outermost one is charged.
  void begin_batch();
  void end_batch();

  class Batch {
   public:
    explicit Batch(Network& net) : net_(net) { net_.begin_batch(); }
    ~Batch() { net_.end_batch(); }
    Batch(const Batch&) = delete;
    Batch& operator=(const Batch&) = delete;

   private:
    Network& net_;
  };

 private:
  struct NodeSlots {
    NodeSpec spec;
    std::vector<std::size_t> registers;
    std::vector<std::optional<std::size_t>> channels;
  };
  struct BitInfo {
    int value = 0;
    std::set<NodeId> available_at;
  };

  NodeSlots& slots(NodeId id);
  const NodeSlots& slots(NodeId id) const;
  std::size_t resolve(const QubitAddress& address) const;
  void touch(std::span<const std::size_t> qubits);
  ClassicalBit new_bit(int value, NodeId at);

  std::vector<NodeSlots> nodes_;
  std::vector<QubitAddress> owner_;  // global index -> address
  std::vector<bool> reserved_;       // by global index
  StateVector state_;
  OutcomeSource source_;
  ResourceLedger ledger_;
  std::vector<ClassicalMessage> log_;
  std::vector<BitInfo> bits_;
  std::vector<EprPair> pairs_;
  double branch_probability_ = 1.0;

  int batch_depth_ = 0;
  std::set<std::size_t> batch_touched_;
};

}  // namespace distq

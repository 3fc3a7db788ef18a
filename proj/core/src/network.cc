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

#include "distq/network.h"

#include <algorithm>
#include <sstream>

#include "distq/errors.h"

namespace distq {
namespace {

std::size_t count_qubits(const std::vector<NodeSpec>& nodes) {
  std::size_t total = 0;
  for (const auto& n : nodes) {
    if (n.register_qubits < 0 || n.channel_qubits < 0) {
      throw ValidationError("negative qubit count for node " + std::to_string(n.id.value));
    }
    total += static_cast<std::size_t>(n.register_qubits + n.channel_qubits);
  }
  return total;
}

const char* pool_name(Pool p) { return p == Pool::kRegister ? "reg" : "chan"; }

}  // namespace

std::string QubitAddress::to_string() const {
  std::ostringstream os;
  os << "(" << node.value << "," << pool_name(pool) << "," << slot << ")";
  return os.str();
}

ResourceLedger ResourceLedger::operator-(const ResourceLedger& rhs) const {
  return {ebits_consumed - rhs.ebits_consumed, cbits_sent - rhs.cbits_sent,
          qubits_transported - rhs.qubits_transported, rounds - rhs.rounds};
}

ResourceLedger& ResourceLedger::operator+=(const ResourceLedger& rhs) {
  ebits_consumed += rhs.ebits_consumed;
  cbits_sent += rhs.cbits_sent;
  qubits_transported += rhs.qubits_transported;
  rounds += rhs.rounds;
  return *this;
}

std::string ResourceLedger::to_string() const {
  std::ostringstream os;
  os << "ebits=" << ebits_consumed << " cbits=" << cbits_sent
     << " transported=" << qubits_transported << " rounds=" << rounds;
  return os.str();
}

// ---------------------------------------------------------------------------
// OutcomeSource

OutcomeSource OutcomeSource::seeded(std::uint64_t seed) {
  OutcomeSource s;
  s.rng_.seed(seed);
  return s;
}

OutcomeSource OutcomeSource::forced(std::vector<int> bits, bool pad_with_zero) {
  OutcomeSource s;
  s.forced_ = true;
  s.pad_ = pad_with_zero;
  s.bits_ = std::move(bits);
  return s;
}

MeasureResult OutcomeSource::measure(StateVector& state, std::size_t qubit) {
  if (!forced_) {
    ++consumed_;
    return state.measure(qubit, rng_);
  }
  int bit = 0;
  if (consumed_ < bits_.size()) {
    bit = bits_[consumed_];
  } else if (!pad_) {
    throw ParameterError("forced outcome sequence exhausted after " +
                         std::to_string(bits_.size()) + " measurements");
  }
  auto result = state.measure_forced(qubit, bit);
  ++consumed_;
  return result;
}

// ---------------------------------------------------------------------------
// Network

Network::Network(std::vector<NodeSpec> nodes, OutcomeSource source)
    : state_(count_qubits(nodes)), source_(std::move(source)) {
  std::size_t next = 0;
  for (auto& spec : nodes) {
    if (spec.channel_slots < 0) spec.channel_slots = spec.channel_qubits;
    if (spec.channel_slots < spec.channel_qubits) {
      throw ValidationError("node " + std::to_string(spec.id.value) +
                            " has more channel qubits than slots");
    }
    for (const auto& existing : nodes_) {
      if (existing.spec.id == spec.id) {
        throw ValidationError("duplicate node id " + std::to_string(spec.id.value));
      }
    }
    NodeSlots ns{spec, {}, {}};
    for (int r = 0; r < spec.register_qubits; ++r) {
      ns.registers.push_back(next++);
      owner_.push_back({spec.id, Pool::kRegister, r});
    }
    ns.channels.resize(static_cast<std::size_t>(spec.channel_slots));
    for (int c = 0; c < spec.channel_qubits; ++c) {
      ns.channels[static_cast<std::size_t>(c)] = next++;
      owner_.push_back({spec.id, Pool::kChannel, c});
    }
    nodes_.push_back(std::move(ns));
  }
  reserved_.assign(owner_.size(), false);
}

Network::NodeSlots& Network::slots(NodeId id) {
  for (auto& n : nodes_)
    if (n.spec.id == id) return n;
  throw AddressError("unknown node " + std::to_string(id.value));
}

const Network::NodeSlots& Network::slots(NodeId id) const {
  for (const auto& n : nodes_)
    if (n.spec.id == id) return n;
  throw AddressError("unknown node " + std::to_string(id.value));
}

std::size_t Network::resolve(const QubitAddress& a) const {
  const auto& ns = slots(a.node);
  if (a.slot < 0) throw AddressError("negative slot in " + a.to_string());
  const auto slot = static_cast<std::size_t>(a.slot);
  if (a.pool == Pool::kRegister) {
    if (slot >= ns.registers.size()) throw AddressError("no register slot " + a.to_string());
    return ns.registers[slot];
  }
  if (slot >= ns.channels.size() || !ns.channels[slot]) {
    throw AddressError("no channel qubit at " + a.to_string());
  }
  return *ns.channels[slot];
}

std::size_t Network::global_index(const QubitAddress& address) const { return resolve(address); }

std::vector<std::size_t> Network::global_indices(std::span<const QubitAddress> addresses) const {
  std::vector<std::size_t> out;
  out.reserve(addresses.size());
  for (const auto& a : addresses) out.push_back(resolve(a));
  return out;
}

QubitAddress Network::address_of(std::size_t global) const {
  if (global >= owner_.size()) throw AddressError("global qubit index out of range");
  return owner_[global];
}

const NodeSpec& Network::node(NodeId id) const { return slots(id).spec; }

std::vector<NodeId> Network::node_ids() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) out.push_back(n.spec.id);
  return out;
}

std::vector<QubitAddress> Network::channel_qubits(NodeId id) const {
  std::vector<QubitAddress> out;
  const auto& ns = slots(id);
  for (std::size_t s = 0; s < ns.channels.size(); ++s)
    if (ns.channels[s]) out.push_back({id, Pool::kChannel, static_cast<int>(s)});
  return out;
}

std::vector<QubitAddress> Network::free_channel_qubits(NodeId id) const {
  std::vector<QubitAddress> out;
  for (const auto& a : channel_qubits(id)) {
    const std::size_t g = resolve(a);
    if (!reserved_[g] && partial_state_check(state_, g, 0)) out.push_back(a);
  }
  return out;
}

int Network::vacant_channel_slots(NodeId id) const {
  const auto& ns = slots(id);
  return static_cast<int>(std::count_if(ns.channels.begin(), ns.channels.end(),
                                        [](const auto& c) { return !c.has_value(); }));
}

bool Network::is_zero(const QubitAddress& address) const {
  return partial_state_check(state_, resolve(address), 0);
}

void Network::check_ownership() const {
  std::vector<int> seen(owner_.size(), 0);
  for (const auto& ns : nodes_) {
    if (static_cast<int>(ns.channels.size()) != ns.spec.channel_slots) {
      throw ValidationError("channel slot count changed on node " +
                            std::to_string(ns.spec.id.value));
    }
    for (std::size_t r = 0; r < ns.registers.size(); ++r) {
      const std::size_t g = ns.registers[r];
      ++seen.at(g);
      if (owner_[g] != QubitAddress{ns.spec.id, Pool::kRegister, static_cast<int>(r)}) {
        throw ValidationError("owner map disagrees for register qubit " + std::to_string(g));
      }
    }
    for (std::size_t c = 0; c < ns.channels.size(); ++c) {
      if (!ns.channels[c]) continue;
      const std::size_t g = *ns.channels[c];
      ++seen.at(g);
      if (owner_[g] != QubitAddress{ns.spec.id, Pool::kChannel, static_cast<int>(c)}) {
        throw ValidationError("owner map disagrees for channel qubit " + std::to_string(g));
      }
    }
  }
  for (std::size_t g = 0; g < seen.size(); ++g)
    if (seen[g] != 1) throw ValidationError("qubit " + std::to_string(g) + " owned " +
                                            std::to_string(seen[g]) + " times");
}

void Network::load_input(const StateVector& input, std::span<const QubitAddress> qubits) {
  if (input.num_qubits() != qubits.size()) {
    throw ValidationError("input has " + std::to_string(input.num_qubits()) +
                          " qubits but " + std::to_string(qubits.size()) + " addresses given");
  }
  if (std::abs(state_[0] - Complex(1.0)) > kTolerance) {
    throw PreconditionError("inputs can only be loaded into a fresh network");
  }
  const auto targets = global_indices(qubits);
  const std::size_t n = state_.num_qubits();
  std::size_t mask = 0;
  for (std::size_t t : targets) {
    const std::size_t bit = std::size_t{1} << (n - 1 - t);
    if (mask & bit) throw AddressError("duplicate input qubit");
    mask |= bit;
  }
  std::vector<Complex> amps(state_.dim());
  const std::size_t k = targets.size();
  for (std::size_t j = 0; j < input.dim(); ++j) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (j & (std::size_t{1} << (k - 1 - i))) index |= std::size_t{1} << (n - 1 - targets[i]);
    amps[index] = input[j];
  }
  state_ = StateVector::from_amplitudes(std::move(amps));
}

void Network::touch(std::span<const std::size_t> qubits) {
  if (batch_depth_ == 0) {
    ++ledger_.rounds;
    return;
  }
  for (std::size_t q : qubits) {
    if (!batch_touched_.insert(q).second) {
      throw DisjointnessError("qubit " + owner_[q].to_string() +
                              " used twice in one parallel batch");
    }
  }
}

void Network::local_apply(const GateMatrix& gate, std::span<const QubitAddress> targets) {
  if (targets.empty()) throw ParameterError("gate needs at least one target");
  for (const auto& t : targets) {
    if (t.node != targets.front().node) {
      throw LocalityError("gate spans nodes " + std::to_string(targets.front().node.value) +
                          " and " + std::to_string(t.node.value));
    }
  }
  const auto idx = global_indices(targets);
  if (gate.arity() != idx.size()) throw ValidationError("gate arity does not match targets");
  touch(idx);
  state_.apply(gate, idx);
}

MeasurementRecord Network::measure(const QubitAddress& address) {
  const std::size_t g = resolve(address);
  const std::size_t one[] = {g};
  touch(one);
  const auto result = source_.measure(state_, g);
  branch_probability_ *= result.probability;
  return {address, result.outcome, result.probability, new_bit(result.outcome, address.node)};
}

QubitAddress Network::transport_qubit(const QubitAddress& from, NodeId to_node) {
  if (from.pool != Pool::kChannel) {
    throw PoolError("only channel qubits can be transported, got " + from.to_string());
  }
  const std::size_t g = resolve(from);
  auto& dst = slots(to_node);
  auto vacant = std::find_if(dst.channels.begin(), dst.channels.end(),
                             [](const auto& c) { return !c.has_value(); });
  if (vacant == dst.channels.end()) {
    throw CapacityError("node " + std::to_string(to_node.value) + " has no vacant channel slot");
  }
  *vacant = g;
  slots(from.node).channels[static_cast<std::size_t>(from.slot)].reset();
  const QubitAddress to{to_node, Pool::kChannel,
                        static_cast<int>(vacant - dst.channels.begin())};
  owner_[g] = to;
  ++ledger_.qubits_transported;
  for (auto& p : pairs_) {
    if (p.first == from) p.first = to;
    if (p.second == from) p.second = to;
  }
  return to;
}

void Network::exchange_channel_qubits(const QubitAddress& a, const QubitAddress& b) {
  if (a.pool != Pool::kChannel || b.pool != Pool::kChannel) {
    throw PoolError("only channel qubits can be exchanged");
  }
  if (a.node == b.node) throw ParameterError("exchange needs two different nodes");
  const std::size_t ga = resolve(a);
  const std::size_t gb = resolve(b);
  slots(a.node).channels[static_cast<std::size_t>(a.slot)] = gb;
  slots(b.node).channels[static_cast<std::size_t>(b.slot)] = ga;
  owner_[ga] = b;
  owner_[gb] = a;
  ledger_.qubits_transported += 2;
  for (auto& p : pairs_) {
    for (QubitAddress* q : {&p.first, &p.second}) {
      if (*q == a) {
        *q = b;
      } else if (*q == b) {
        *q = a;
      }
    }
  }
}

ClassicalBit Network::new_bit(int value, NodeId at) {
  bits_.push_back({value, {at}});
  return {bits_.size() - 1, value};
}

bool Network::bit_available(const ClassicalBit& bit, NodeId at) const {
  if (bit.id >= bits_.size()) return false;
  return bits_[bit.id].available_at.count(at) > 0;
}

void Network::send_cbit(const ClassicalBit& bit, NodeId from, std::vector<NodeId> to,
                        std::string tag) {
  slots(from);
  if (!bit_available(bit, from)) {
    throw CausalityError("node " + std::to_string(from.value) + " cannot send bit " +
                         std::to_string(bit.id) + " it does not hold");
  }
  std::uint64_t remote = 0;
  for (NodeId dst : to) {
    slots(dst);
    if (dst != from) ++remote;
    bits_[bit.id].available_at.insert(dst);
  }
  ledger_.cbits_sent += remote;
  log_.push_back({from, std::move(to), bits_[bit.id].value, std::move(tag)});
}

ClassicalBit Network::xor_bits(NodeId at, std::span<const ClassicalBit> bits) {
  int value = 0;
  for (const auto& b : bits) {
    if (!bit_available(b, at)) {
      throw CausalityError("bit " + std::to_string(b.id) + " is not available at node " +
                           std::to_string(at.value));
    }
    value ^= bits_[b.id].value;
  }
  return new_bit(value, at);
}

void Network::classically_controlled_apply(const ClassicalBit& bit, const GateMatrix& gate,
                                           std::span<const QubitAddress> targets) {
  if (targets.empty()) throw ParameterError("gate needs at least one target");
  if (!bit_available(bit, targets.front().node)) {
    throw CausalityError("bit " + std::to_string(bit.id) + " has not reached node " +
                         std::to_string(targets.front().node.value));
  }
  for (const auto& t : targets) {
    if (t.node != targets.front().node) throw LocalityError("classically controlled gate spans nodes");
  }
  const auto idx = global_indices(targets);
  if (gate.arity() != idx.size()) throw ValidationError("gate arity does not match targets");
  touch(idx);
  if (bits_[bit.id].value == 1) state_.apply(gate, idx);
}

void Network::register_pair(const EprPair& pair) {
  if (pair.first.node == pair.second.node) throw ParameterError("EPR pair must span two nodes");
  const std::size_t g[] = {resolve(pair.first), resolve(pair.second)};
  if (!is_cat_state(state_, g)) {
    throw InvalidEntanglementError("qubits " + pair.first.to_string() + " and " +
                                   pair.second.to_string() + " do not hold an EPR pair");
  }
  reserved_[g[0]] = true;
  reserved_[g[1]] = true;
  pairs_.push_back(pair);
}

std::optional<EprPair> Network::take_pair(NodeId a, NodeId b) {
  for (auto it = pairs_.begin(); it != pairs_.end(); ++it) {
    if (it->first.node == a && it->second.node == b) {
      EprPair p = *it;
      pairs_.erase(it);
      return p;
    }
    if (it->first.node == b && it->second.node == a) {
      EprPair p{it->second, it->first};
      pairs_.erase(it);
      return p;
    }
  }
  return std::nullopt;
}

std::size_t Network::pairs_available(NodeId a, NodeId b) const {
  return static_cast<std::size_t>(std::count_if(pairs_.begin(), pairs_.end(), [&](const EprPair& p) {
    return (p.first.node == a && p.second.node == b) || (p.first.node == b && p.second.node == a);
  }));
}

void Network::reserve(const QubitAddress& address) { reserved_[resolve(address)] = true; }

void Network::release(const QubitAddress& address) {
  const std::size_t g = resolve(address);
  if (!partial_state_check(state_, g, 0)) {
    throw CannotResetError("qubit " + address.to_string() + " is not |0>; cannot release it");
  }
  reserved_[g] = false;
}

bool Network::reserved(const QubitAddress& address) const { return reserved_[resolve(address)]; }

void Network::begin_batch() {
  if (batch_depth_++ == 0) batch_touched_.clear();
}

void Network::end_batch() {
  if (batch_depth_ == 0) return;
  if (--batch_depth_ == 0) {
    if (!batch_touched_.empty()) ++ledger_.rounds;
    batch_touched_.clear();
  }
}

}  // namespace distq

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

#include "distq/protocols.h"

#include <algorithm>
#include <set>

#include "distq/errors.h"

namespace distq {
namespace {

/// Unreserved channel qubits of a node (any state).
std::vector<QubitAddress> unreserved_channels(const Network& net, NodeId node) {
  std::vector<QubitAddress> out;
  for (const auto& a : net.channel_qubits(node))
    if (!net.reserved(a)) out.push_back(a);
  return out;
}

/// The first `count` unreserved channel qubits, which must all be |0>.
std::vector<QubitAddress> take_free_channels(const Network& net, NodeId node, std::size_t count) {
  auto avail = unreserved_channels(net, node);
  if (avail.size() < count) {
    throw CapacityError("node " + std::to_string(node.value) + " needs " + std::to_string(count) +
                        " unreserved channel qubits, has " + std::to_string(avail.size()));
  }
  avail.resize(count);
  for (const auto& a : avail) {
    if (!net.is_zero(a)) {
      throw PreconditionError("channel qubit " + a.to_string() +
                              " must be |0> before it is entangled");
    }
  }
  return avail;
}

/// Local E gate on two qubits of one node.
void entangle_pair(Network& net, const QubitAddress& a, const QubitAddress& b) {
  net.local_apply(gates::hadamard(), {a});
  net.local_apply(gates::cnot(), {a, b});
}

class RunScope {
 public:
  RunScope(const Network& net, std::string name)
      : net_(net), name_(std::move(name)), start_(net.ledger()), log_start_(net.message_log().size()) {}

  ProtocolRun finish() const {
    ProtocolRun run;
    run.name = name_;
    run.ledger = net_.ledger() - start_;
    run.rounds = run.ledger.rounds;
    const auto& log = net_.message_log();
    run.messages.assign(log.begin() + static_cast<std::ptrdiff_t>(log_start_), log.end());
    return run;
  }

 private:
  const Network& net_;
  std::string name_;
  ResourceLedger start_;
  std::size_t log_start_;
};

void require_distinct(std::span<const QubitAddress> qubits, const char* what) {
  std::set<QubitAddress> seen(qubits.begin(), qubits.end());
  if (seen.size() != qubits.size()) throw ParameterError(std::string("duplicate qubit in ") + what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Establishment

std::array<EprPair, 2> establish_epr_exchange(Network& net, NodeId a, NodeId b) {
  if (a == b) throw ParameterError("EPR exchange needs two different nodes");
  const auto ca = take_free_channels(net, a, 2);
  const auto cb = take_free_channels(net, b, 2);
  {
    Network::Batch batch(net);
    net.local_apply(gates::hadamard(), {ca[0]});
    net.local_apply(gates::hadamard(), {cb[0]});
  }
  {
    Network::Batch batch(net);
    net.local_apply(gates::cnot(), {ca[0], ca[1]});
    net.local_apply(gates::cnot(), {cb[0], cb[1]});
  }
  // After the exchange slot ca[1] holds b's second qubit and vice versa.
  net.exchange_channel_qubits(ca[1], cb[1]);
  const EprPair p1{ca[0], cb[1]};
  const EprPair p2{ca[1], cb[0]};
  net.register_pair(p1);
  net.register_pair(p2);
  return {p1, p2};
}

EprPair establish_epr_pair(Network& net, NodeId initiator, NodeId peer) {
  if (initiator == peer) throw ParameterError("EPR pair needs two different nodes");
  const auto own = unreserved_channels(net, initiator);
  if (own.size() >= 2) {
    const auto local = take_free_channels(net, initiator, 2);
    const auto remote = take_free_channels(net, peer, 1);
    entangle_pair(net, local[0], local[1]);
    net.exchange_channel_qubits(local[1], remote[0]);
    const EprPair pair{local[0], remote[0]};
    net.register_pair(pair);
    return pair;
  }
  // One channel qubit here: borrow the peer's through a vacant slot and send
  // one half of the fresh pair back.
  if (net.vacant_channel_slots(initiator) == 0) {
    throw CapacityError("node " + std::to_string(initiator.value) +
                        " has neither two free channel qubits nor a vacant slot");
  }
  const auto local = take_free_channels(net, initiator, 1);
  const auto remote = take_free_channels(net, peer, 1);
  const QubitAddress borrowed = net.transport_qubit(remote[0], initiator);
  entangle_pair(net, local[0], borrowed);
  const QubitAddress returned = net.transport_qubit(borrowed, peer);
  const EprPair pair{local[0], returned};
  net.register_pair(pair);
  return pair;
}

std::vector<QubitAddress> establish_cat(Network& net, std::span<const NodeId> nodes) {
  if (nodes.size() < 2) throw ParameterError("a shared cat state needs at least two nodes");
  std::set<NodeId> distinct(nodes.begin(), nodes.end());
  if (distinct.size() != nodes.size()) throw ParameterError("cat nodes must be distinct");

  const NodeId home = nodes.front();
  const auto local = take_free_channels(net, home, nodes.size());
  // Check destinations before touching the state.
  for (const NodeId dst : nodes.subspan(1)) {
    if (net.vacant_channel_slots(dst) == 0 && unreserved_channels(net, dst).empty()) {
      throw CapacityError("node " + std::to_string(dst.value) +
                          " can neither receive nor exchange a channel qubit");
    }
  }
  net.local_apply(gates::hadamard(), {local[0]});
  for (std::size_t i = 1; i < local.size(); ++i) net.local_apply(gates::cnot(), {local[i - 1], local[i]});

  std::vector<QubitAddress> members{local[0]};
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const NodeId dst = nodes[i];
    if (net.vacant_channel_slots(dst) > 0) {
      members.push_back(net.transport_qubit(local[i], dst));
    } else {
      const auto swap_in = take_free_channels(net, dst, 1);
      net.exchange_channel_qubits(local[i], swap_in[0]);
      members.push_back(swap_in[0]);
    }
  }
  for (const auto& m : members) net.reserve(m);
  return members;
}

EprPair acquire_pair(Network& net, NodeId a, NodeId b, const ProtocolOptions& opts) {
  if (auto pair = net.take_pair(a, b)) return *pair;
  if (!opts.auto_establish) {
    throw ResourceError("no EPR pair between nodes " + std::to_string(a.value) + " and " +
                        std::to_string(b.value) + " and auto-establish is off");
  }
  if (unreserved_channels(net, a).size() < 2 && unreserved_channels(net, b).size() >= 2) {
    establish_epr_pair(net, b, a);
    return *net.take_pair(a, b);
  }
  establish_epr_pair(net, a, b);
  return *net.take_pair(a, b);
}

void reset_channel_qubits(Network& net, std::span<const MeasurementRecord> records) {
  for (const auto& rec : records) {
    const std::size_t g = net.global_index(rec.address);
    if (!partial_state_check(net.state(), g, rec.outcome)) {
      throw CannotResetError("qubit " + rec.address.to_string() + " is not in the measured state |" +
                             std::to_string(rec.outcome) + ">");
    }
  }
  {
    Network::Batch batch(net);
    for (const auto& rec : records) net.classically_controlled_apply(rec.bit, gates::pauli_x(), {rec.address});
  }
  for (const auto& rec : records) {
    if (rec.address.pool == Pool::kChannel) net.release(rec.address);
  }
}

// ---------------------------------------------------------------------------
// Non-local controlled gates

ProtocolRun nonlocal_cnot(Network& net, const QubitAddress& control, const QubitAddress& target,
                          const ProtocolOptions& opts) {
  const TargetedGate gate{gates::pauli_x(), {target}};
  auto run = nonlocal_controlled_sequence(net, control, std::span(&gate, 1), opts);
  run.name = "nonlocal-cnot";
  return run;
}

ProtocolRun nonlocal_controlled_sequence(Network& net, const QubitAddress& control,
                                         std::span<const TargetedGate> gates,
                                         const ProtocolOptions& opts) {
  if (gates.empty()) throw ParameterError("controlled sequence needs at least one gate");
  const NodeId remote = gates.front().targets.empty() ? control.node : gates.front().targets.front().node;
  if (remote == control.node) throw ParameterError("targets must be on a node other than the control's");
  for (const auto& g : gates) {
    if (g.targets.empty()) throw ParameterError("gate without targets");
    for (const auto& t : g.targets) {
      if (t.node != remote) {
        throw LocalityError("target " + t.to_string() + " is not on node " + std::to_string(remote.value));
      }
      if (t == control) throw ParameterError("control cannot be a target");
    }
  }

  RunScope scope(net, "nonlocal-controlled-sequence");
  const EprPair pair = acquire_pair(net, control.node, remote, opts);
  const QubitAddress cat[] = {pair.first, pair.second};
  const CatGroup group = cat_entangler(net, control, cat);

  const ResourceLedger before_section = net.ledger();
  for (const auto& g : gates) {
    std::vector<QubitAddress> targets{pair.second};
    targets.insert(targets.end(), g.targets.begin(), g.targets.end());
    net.local_apply(add_controls(g.gate, 1), targets);
  }
  const ResourceLedger section = net.ledger() - before_section;

  const auto records = cat_disentangler(net, group, control);
  const MeasurementRecord to_reset[] = {*group.r, records.front()};
  reset_channel_qubits(net, to_reset);

  auto run = scope.finish();
  run.sections.emplace_back("controlled-section", section);
  return run;
}

ProtocolRun parallel_distributed_control(Network& net, const QubitAddress& control,
                                         std::span<const LocalPart> parts,
                                         std::span<const QubitAddress> cat,
                                         const ProtocolOptions& opts) {
  if (parts.empty()) throw ParameterError("parallel control needs at least one part");
  std::set<NodeId> part_nodes;
  std::set<QubitAddress> used{control};
  for (const auto& p : parts) {
    if (p.node == control.node) throw ParameterError("parts must live off the control's node");
    if (p.targets.empty()) throw ParameterError("part without targets");
    for (const auto& t : p.targets) {
      if (t.node != p.node) throw LocalityError("target " + t.to_string() + " is off its part's node");
      if (!used.insert(t).second) {
        throw DisjointnessError("qubit " + t.to_string() + " is shared between parts");
      }
    }
  }
  for (const auto& p : parts) {
    if (!part_nodes.insert(p.node).second) throw ParameterError("one part per node");
  }

  RunScope scope(net, "parallel-distributed-control");
  std::vector<QubitAddress> members(cat.begin(), cat.end());
  if (members.empty()) {
    if (!opts.auto_establish) throw ResourceError("parallel control needs a shared cat state");
    std::vector<NodeId> nodes{control.node};
    for (const auto& p : parts) nodes.push_back(p.node);
    members = establish_cat(net, nodes);
  }
  if (members.size() != parts.size() + 1) {
    throw ParameterError("cat state must have one member per part plus one");
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (members[i + 1].node != parts[i].node) {
      throw ParameterError("cat member " + members[i + 1].to_string() + " is not on part node " +
                           std::to_string(parts[i].node.value));
    }
  }

  const CatGroup group = cat_entangler(net, control, members);

  const ResourceLedger before_section = net.ledger();
  {
    Network::Batch batch(net);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      std::vector<QubitAddress> targets{group.members[i + 1]};
      targets.insert(targets.end(), parts[i].targets.begin(), parts[i].targets.end());
      net.local_apply(add_controls(parts[i].gate, 1), targets);
    }
  }
  const ResourceLedger section = net.ledger() - before_section;

  auto records = cat_disentangler(net, group, control);
  records.push_back(*group.r);
  reset_channel_qubits(net, records);

  auto run = scope.finish();
  run.rounds = section.rounds;
  run.sections.emplace_back("controlled-section", section);
  return run;
}

// ---------------------------------------------------------------------------
// Distributed E_m

std::vector<int> distributed_em_channel_demand(std::size_t m, EmShape shape) {
  std::vector<int> outdeg(m, 0);
  for (const auto& round : em_schedule(m, shape))
    for (const auto& step : round) ++outdeg[step.control];
  std::vector<int> demand(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    // Node j > 0 initiates its incoming edge (two free qubits at that moment)
    // and then holds one qubit per edge.
    demand[j] = j == 0 ? outdeg[j] : std::max(2, 1 + outdeg[j]);
  }
  return demand;
}

ProtocolRun distributed_em(Network& net, std::span<const QubitAddress> members, EmShape shape) {
  const std::size_t m = members.size();
  if (m < 2) throw ParameterError("distributed E_m needs at least two nodes");
  std::set<NodeId> nodes;
  for (const auto& q : members) {
    if (!nodes.insert(q.node).second) throw ParameterError("E_m members must sit on distinct nodes");
    if (!net.is_zero(q)) throw PreconditionError("E_m member " + q.to_string() + " is not |0>");
  }
  const auto demand = distributed_em_channel_demand(m, shape);
  for (std::size_t j = 0; j < m; ++j) {
    const auto avail = net.free_channel_qubits(members[j].node).size();
    if (avail < static_cast<std::size_t>(demand[j])) {
      throw CapacityError("node " + std::to_string(members[j].node.value) + " needs " +
                          std::to_string(demand[j]) + " free channel qubits for " +
                          (shape == EmShape::kLinear ? "linear" : "binary-tree") + " E_" +
                          std::to_string(m) + ", has " + std::to_string(avail));
    }
  }

  RunScope scope(net, shape == EmShape::kLinear ? "distributed-em-linear" : "distributed-em-tree");
  const auto schedule = em_schedule(m, shape);
  for (const auto& round : schedule)
    for (const auto& step : round) establish_epr_pair(net, members[step.target].node, members[step.control].node);

  net.local_apply(gates::hadamard(), {members[0]});
  std::uint64_t layers = 0;
  for (const auto& round : schedule) {
    for (const auto& step : round) nonlocal_cnot(net, members[step.control], members[step.target]);
    ++layers;
  }
  auto run = scope.finish();
  run.rounds = layers;
  return run;
}

// ---------------------------------------------------------------------------
// Teleportation and swap

ProtocolRun teleport_with_reset(Network& net, const QubitAddress& source, const EprPair& epr,
                                const QubitAddress& empty) {
  if (empty.node != epr.second.node || empty.pool != Pool::kRegister) {
    throw ParameterError("empty qubit must be a register qubit on the receiving node");
  }
  if (!net.is_zero(empty)) throw PreconditionError("empty qubit " + empty.to_string() + " is not |0>");

  RunScope scope(net, "teleport-with-reset");
  const TeleportRecords recs = teleport(net, source, epr);
  net.local_apply(gates::swap(), {epr.second, empty});
  const MeasurementRecord to_reset[] = {recs.channel, recs.source};
  reset_channel_qubits(net, to_reset);
  net.release(epr.second);
  return scope.finish();
}

ProtocolRun distributed_swap(Network& net, const QubitAddress& a, const QubitAddress& b,
                             const SwapOptions& opts) {
  if (a.node == b.node) throw ParameterError("distributed swap needs qubits on two nodes");
  RunScope scope(net, "distributed-swap");
  const NodeId na = a.node;
  const NodeId nb = b.node;

  const bool two_channels = net.pairs_available(na, nb) >= 2 ||
                            (opts.auto_establish && net.free_channel_qubits(na).size() >= 2 &&
                             net.free_channel_qubits(nb).size() >= 2);
  if (two_channels) {
    if (net.pairs_available(na, nb) < 2) establish_epr_exchange(net, na, nb);
    const EprPair p1 = *net.take_pair(na, nb);
    const EprPair p2 = *net.take_pair(nb, na);

    // a -> p1.second; the freed a and p1.first are reset at once.
    const TeleportRecords t1 = teleport(net, a, p1);
    const MeasurementRecord r1[] = {t1.channel, t1.source};
    reset_channel_qubits(net, r1);
    // b -> p2.second on a's node.
    const TeleportRecords t2 = teleport(net, b, p2);
    const MeasurementRecord r2[] = {t2.channel, t2.source};
    reset_channel_qubits(net, r2);
    // The receiving channel qubits are swap buffers; move into the freed slots.
    {
      Network::Batch batch(net);
      net.local_apply(gates::swap(), {p2.second, a});
      net.local_apply(gates::swap(), {p1.second, b});
    }
    net.release(p1.second);
    net.release(p2.second);
    return scope.finish();
  }

  if (!opts.empty) {
    throw CapacityError("distributed swap needs two channel qubits per node or an empty register qubit");
  }
  const QubitAddress empty = *opts.empty;
  if (empty.node != nb) throw ParameterError("empty qubit must be on b's node");
  const ProtocolOptions po{opts.auto_establish};
  teleport_with_reset(net, a, acquire_pair(net, na, nb, po), empty);
  // a is |0> now and receives b.
  teleport_with_reset(net, b, acquire_pair(net, nb, na, po), a);
  net.local_apply(gates::swap(), {empty, b});
  return scope.finish();
}

// ---------------------------------------------------------------------------
// Multi-controlled gates

ProtocolRun nonlocal_multi_control(Network& net, std::span<const QubitAddress> controls,
                                   const GateMatrix& base, const QubitAddress& target,
                                   const MultiControlOptions& opts) {
  if (base.arity() != 1) throw ValidationError("multi-control base must be a one-qubit gate");
  if (controls.empty()) throw ParameterError("at least one control is required");
  std::vector<QubitAddress> all(controls.begin(), controls.end());
  all.push_back(target);
  require_distinct(all, "multi-control lines");
  for (const auto& w : opts.workspace) {
    if (w.node != target.node || w.pool != Pool::kRegister) {
      throw ParameterError("workspace qubits must be registers on the target's node");
    }
    if (std::find(all.begin(), all.end(), w) != all.end()) {
      throw ParameterError("workspace qubit doubles as a gate line");
    }
  }
  std::size_t remote = 0;
  for (const auto& c : controls)
    if (c.node != target.node) ++remote;
  if (!opts.workspace.empty() && opts.workspace.size() < remote) {
    throw CapacityError("node " + std::to_string(target.node.value) + " has " +
                        std::to_string(opts.workspace.size()) + " workspace qubits for " +
                        std::to_string(remote) +
                        " remote controls; decompose the gate with decompose_multi_control_x");
  }

  RunScope scope(net, "nonlocal-multi-control");
  const ProtocolOptions po{opts.auto_establish};
  struct Distributed {
    CatGroup group;
    QubitAddress line;
    QubitAddress control;
  };
  std::vector<Distributed> distributed;
  std::vector<QubitAddress> lines;
  std::size_t next_workspace = 0;
  for (const auto& c : controls) {
    if (c.node == target.node) {
      lines.push_back(c);
      continue;
    }
    EprPair pair;
    try {
      pair = acquire_pair(net, c.node, target.node, po);
    } catch (const CapacityError& e) {
      throw CapacityError(std::string(e.what()) +
                          "; decompose the gate with decompose_multi_control_x");
    }
    const QubitAddress cat[] = {pair.first, pair.second};
    CatGroup group = cat_entangler(net, c, cat);
    QubitAddress line = pair.second;
    if (!opts.workspace.empty()) {
      const QubitAddress w = opts.workspace[next_workspace++];
      if (!net.is_zero(w)) throw PreconditionError("workspace qubit " + w.to_string() + " is not |0>");
      net.local_apply(gates::swap(), {pair.second, w});
      net.release(pair.second);
      line = w;
      group.members = {c, w};
    }
    lines.push_back(line);
    distributed.push_back({group, line, c});
  }

  lines.push_back(target);
  net.local_apply(add_controls(base, controls.size()), lines);

  std::vector<MeasurementRecord> to_reset;
  for (const auto& d : distributed) {
    auto recs = cat_disentangler(net, d.group, d.control);
    to_reset.insert(to_reset.end(), recs.begin(), recs.end());
    to_reset.push_back(*d.group.r);
  }
  reset_channel_qubits(net, to_reset);
  return scope.finish();
}

ProtocolRun decompose_multi_control_x(Network& net, std::span<const QubitAddress> controls,
                                      const QubitAddress& ancilla, const QubitAddress& target,
                                      const ProtocolOptions& opts) {
  if (controls.size() != 4) {
    throw ParameterError("wedge_4(X) decomposition needs exactly four controls, got " +
                         std::to_string(controls.size()));
  }
  const QubitAddress c1 = controls[0], c2 = controls[1], c3 = controls[2], c4 = controls[3];
  const QubitAddress lines[] = {c1, c2, c3, c4, ancilla, target};
  require_distinct(lines, "wedge_4(X) lines");
  const GateMatrix& ccx = gates::toffoli();
  const GateMatrix cccx = add_controls(gates::pauli_x(), 3);

  RunScope scope(net, "mctrl-decompose");
  const bool all_local = std::all_of(std::begin(lines), std::end(lines),
                                     [&](const QubitAddress& q) { return q.node == c1.node; });
  if (all_local) {
    for (int rep = 0; rep < 2; ++rep) {
      net.local_apply(ccx, {c1, c2, ancilla});
      net.local_apply(cccx, {c3, c4, ancilla, target});
    }
    auto run = scope.finish();
    run.name = "mctrl-decompose-local";
    return run;
  }

  const NodeId top = c1.node;
  const NodeId bottom = c3.node;
  if (c2.node != top || ancilla.node != top || c4.node != bottom || target.node != bottom ||
      top == bottom) {
    throw ParameterError("distributed wedge_4(X) needs c1, c2, ancilla on one node and c3, c4, "
                         "target on another");
  }
  const EprPair pair = acquire_pair(net, top, bottom, opts);

  // Fold the ancilla before and after the first wedge_2 into the local half:
  // the pair then carries (c1 AND c2) and the remote half becomes its copy.
  net.local_apply(gates::cnot(), {ancilla, pair.first});
  net.local_apply(ccx, {c1, c2, ancilla});
  net.local_apply(gates::cnot(), {ancilla, pair.first});
  const MeasurementRecord r = net.measure(pair.first);
  net.send_cbit(r.bit, top, {bottom}, "cat-entangle-r");
  net.classically_controlled_apply(r.bit, gates::pauli_x(), {pair.second});
  net.charge_ebits(1);

  net.local_apply(cccx, {c3, c4, pair.second, target});

  net.local_apply(gates::hadamard(), {pair.second});
  const MeasurementRecord s = net.measure(pair.second);
  net.send_cbit(s.bit, bottom, {top}, "disentangle-r_k");
  // Phase (-1)^(s * c1 c2) split across the two ancilla values.
  net.classically_controlled_apply(s.bit, gates::pauli_z(), {ancilla});
  net.local_apply(ccx, {c1, c2, ancilla});
  net.classically_controlled_apply(s.bit, gates::pauli_z(), {ancilla});

  const MeasurementRecord to_reset[] = {r, s};
  reset_channel_qubits(net, to_reset);
  auto run = scope.finish();
  run.name = "mctrl-decompose-distributed";
  return run;
}

}  // namespace distq

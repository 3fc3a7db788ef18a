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

#include "distq/primitives.h"

#include <algorithm>
#include <map>

#include "distq/errors.h"
#include "distq/gates.h"

namespace distq {
namespace {

bool contains(std::span<const QubitAddress> list, const QubitAddress& a) {
  return std::find(list.begin(), list.end(), a) != list.end();
}

}  // namespace

CatGroup cat_entangler(Network& net, const QubitAddress& control,
                       std::span<const QubitAddress> cat) {
  if (cat.size() < 2) throw ParameterError("cat-entangler needs a cat of at least two qubits");
  if (contains(cat, control)) throw ParameterError("control qubit cannot be a cat member");
  if (cat.front().node != control.node) {
    throw LocalityError("first cat member " + cat.front().to_string() +
                        " is not on the control's node " + std::to_string(control.node.value));
  }
  const auto cat_idx = net.global_indices(cat);
  if (!is_cat_state(net.state(), cat_idx)) {
    throw InvalidEntanglementError("cat-entangler input is not a cat state");
  }

  net.local_apply(gates::cnot(), {control, cat.front()});
  const MeasurementRecord r = net.measure(cat.front());

  std::vector<NodeId> remote;
  for (const auto& member : cat.subspan(1)) {
    if (member.node != control.node &&
        std::find(remote.begin(), remote.end(), member.node) == remote.end()) {
      remote.push_back(member.node);
    }
  }
  if (!remote.empty()) net.send_cbit(r.bit, control.node, remote, "cat-entangle-r");
  {
    Network::Batch batch(net);
    for (const auto& member : cat.subspan(1)) {
      net.classically_controlled_apply(r.bit, gates::pauli_x(), {member});
    }
  }
  net.charge_ebits(cat.size() - 1);

  CatGroup group;
  group.members.push_back(control);
  group.members.insert(group.members.end(), cat.begin() + 1, cat.end());
  group.measured_qubit = cat.front();
  group.r = r;
  return group;
}

std::pair<CatGroup, std::vector<MeasurementRecord>> cat_shrink(
    Network& net, const CatGroup& group, std::span<const QubitAddress> drop,
    std::span<const QubitAddress> keep_group) {
  if (keep_group.empty()) throw ParameterError("cat_shrink must keep at least one member");
  if (drop.size() + keep_group.size() != group.members.size()) {
    throw ParameterError("drop and keep sets must partition the group");
  }
  for (const auto& a : drop) {
    if (!contains(group.members, a) || contains(keep_group, a)) {
      throw ParameterError("qubit " + a.to_string() + " is not a droppable member");
    }
  }
  for (const auto& a : keep_group) {
    if (!contains(group.members, a)) {
      throw ParameterError("qubit " + a.to_string() + " is not a member of the group");
    }
  }
  const auto member_idx = net.global_indices(group.members);
  if (!is_cat_like(net.state(), member_idx)) {
    throw InvalidEntanglementError("group does not hold a cat-like state");
  }

  CatGroup out;
  out.members.assign(keep_group.begin(), keep_group.end());
  std::vector<MeasurementRecord> records;
  if (drop.empty()) return {out, records};

  {
    Network::Batch batch(net);
    for (const auto& a : drop) net.local_apply(gates::hadamard(), {a});
  }
  {
    Network::Batch batch(net);
    for (const auto& a : drop) records.push_back(net.measure(a));
  }

  const QubitAddress fix = keep_group.front();
  std::map<NodeId, std::vector<ClassicalBit>> by_node;
  for (const auto& rec : records) by_node[rec.address.node].push_back(rec.bit);

  std::vector<ClassicalBit> parities;
  for (const auto& [node, bits] : by_node) {
    const ClassicalBit parity = net.xor_bits(node, bits);
    if (node != fix.node) net.send_cbit(parity, node, {fix.node}, "disentangle-r_k");
    parities.push_back(parity);
  }
  const ClassicalBit total = net.xor_bits(fix.node, parities);
  net.classically_controlled_apply(total, gates::pauli_z(), {fix});
  return {out, records};
}

std::vector<MeasurementRecord> cat_disentangler(Network& net, const CatGroup& group,
                                                const QubitAddress& keep) {
  if (!contains(group.members, keep)) {
    throw ParameterError("keep qubit " + keep.to_string() + " is not in the group");
  }
  std::vector<QubitAddress> drop;
  for (const auto& m : group.members)
    if (m != keep) drop.push_back(m);
  const QubitAddress keep_one[] = {keep};
  return cat_shrink(net, group, drop, keep_one).second;
}

TeleportRecords teleport(Network& net, const QubitAddress& source, const EprPair& epr) {
  const QubitAddress cat[] = {epr.first, epr.second};
  const CatGroup group = cat_entangler(net, source, cat);
  const auto records = cat_disentangler(net, group, epr.second);
  return {*group.r, records.front()};
}

}  // namespace distq

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
// The two LOCC building blocks. A cat-entangler turns a control qubit plus an
// m-fold cat state into a cat-like state a|0..0> + b|1..1> that lets every
// member act as a local copy of the control line. A cat-disentangler
// collapses such a group back onto one chosen member.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "distq/network.h"

namespace distq {

struct CatGroup {
  /// Qubits sharing the cat-like state. After an entangler the control comes
  /// first.
  std::vector<QubitAddress> members;
  /// The cat member sacrificed by the entangler.
  std::optional<QubitAddress> measured_qubit;
  std::optional<MeasurementRecord> r;
};

/// CNOT from `control` into cat[0] (same node), measure cat[0], send the
/// outcome to every other node holding a cat member, and flip those members
/// when it is 1. Charges |cat|-1 ebits.
///
/// Throws LocalityError if cat[0] is not on the control's node and
/// InvalidEntanglementError if `cat` does not hold a cat state.
CatGroup cat_entangler(Network& net, const QubitAddress& control,
                       std::span<const QubitAddress> cat);

/// Hadamard and measure every member in `drop`, XOR the outcomes per node,
/// ship one bit per remote node to keep_group[0]'s node, and apply Z there when
/// the total parity is 1. The members of `keep_group` remain a cat-like group
/// carrying the same amplitudes. Measured members are left in |r_k>.
std::pair<CatGroup, std::vector<MeasurementRecord>> cat_shrink(
    Network& net, const CatGroup& group, std::span<const QubitAddress> drop,
    std::span<const QubitAddress> keep_group);

/// cat_shrink down to the single member `keep`. Throws ParameterError if
/// `keep` is not a member.
std::vector<MeasurementRecord> cat_disentangler(Network& net, const CatGroup& group,
                                                const QubitAddress& keep);

struct TeleportRecords {
  /// Outcome on the local half of the pair (entangler step).
  MeasurementRecord channel;
  /// Outcome on the source qubit (disentangler step).
  MeasurementRecord source;
};

/// Entangler from `source` into `epr`, then disentangler keeping epr.second.
/// The source's state ends up on epr.second; source and epr.first are left in
/// measured basis states. One ebit, two cbits.
TeleportRecords teleport(Network& net, const QubitAddress& source, const EprPair& epr);

}  // namespace distq

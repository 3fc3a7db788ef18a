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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distq/state_vector.h"

namespace distq {
namespace gates {

const GateMatrix& identity1();
const GateMatrix& pauli_x();
const GateMatrix& pauli_z();
const GateMatrix& hadamard();
/// Control is the first target.
const GateMatrix& cnot();
const GateMatrix& toffoli();
const GateMatrix& swap();

GateMatrix identity(std::size_t arity);

/// General one-qubit gate in the U3(theta, phi, lambda) parameterization.
GateMatrix single_qubit(double theta, double phi, double lambda);

/// Uniformly random unitary of the given arity (QR of a complex Gaussian).
GateMatrix random_unitary(std::size_t arity, std::mt19937_64& rng);

}  // namespace gates

/// m-fold controlled single-qubit gate: the m controls come first, the target
/// last.
struct ControlledSpec {
  std::size_t num_controls = 0;
  GateMatrix base;
};

/// The wedge_m(U) operator: identity except for the trailing 2x2 block, which
/// equals `spec.base`. Throws ValidationError if the base is not a one-qubit
/// gate.
GateMatrix make_controlled(const ControlledSpec& spec);

/// Adds `num_controls` leading controls to a gate of any arity.
GateMatrix add_controls(const GateMatrix& gate, std::size_t num_controls);

/// diag(1, exp(2 pi i / 2^k)); ValidationError for k < 1.
GateMatrix make_rk(int k);

enum class EmShape { kLinear, kBinaryTree };

/// One CNOT of an entangling schedule, as positions into the qubit list.
struct CnotStep {
  std::size_t control = 0;
  std::size_t target = 0;
};

/// CNOT rounds (after the initial Hadamard on position 0) that turn |0..0>
/// into the m-fold cat state. Each round touches pairwise-disjoint positions.
///
/// Linear: round t is the single CNOT t -> t+1.
/// Binary tree: in each round every already-entangled position, in increasing
/// order, fans out to the lowest not-yet-entangled position.
std::vector<std::vector<CnotStep>> em_schedule(std::size_t m, EmShape shape);

/// Applies the E_m circuit to `qubits`, all of which must be |0>.
/// Returns the number of CNOT rounds (the depth, Hadamard excluded).
std::size_t local_entangle_em(StateVector& state, std::span<const std::size_t> qubits,
                              EmShape shape);

}  // namespace distq

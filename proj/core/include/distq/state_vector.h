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
// Dense state-vector simulation. Qubit 0 is the most significant bit of the
// basis index, so |q0 q1 ... q_{n-1}> reads left to right.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace distq {

using Complex = std::complex<double>;

/// Tolerance for state comparisons, norms and unitarity.
inline constexpr double kTolerance = 1e-10;
/// Amplitudes (and probabilities) below this are treated as zero.
inline constexpr double kZeroAmplitude = 1e-12;

/// A 2^arity x 2^arity unitary, row-major. Row/column index bit (arity-1-i)
/// corresponds to the i-th target passed to apply_gate.
class GateMatrix {
 public:
  /// Throws ValidationError if the entries do not form a unitary of the
  /// stated arity.
  GateMatrix(std::size_t arity, std::vector<Complex> entries);

  std::size_t arity() const { return arity_; }
  std::size_t dim() const { return std::size_t{1} << arity_; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim() + col];
  }
  std::span<const Complex> entries() const { return entries_; }
  /// Local indices whose row or column differs from the identity, ascending.
  std::span<const std::size_t> active_indices() const { return active_; }
  /// The matrix restricted to active_indices(), row-major.
  std::span<const Complex> active_block() const { return block_; }

  GateMatrix adjoint() const;
  /// Matrix product this * rhs (rhs acts first).
  GateMatrix operator*(const GateMatrix& rhs) const;
  /// Kronecker product; this occupies the more significant targets.
  GateMatrix tensor(const GateMatrix& rhs) const;

  bool approx_equal(const GateMatrix& other, double tol = kTolerance) const;

 private:
  std::size_t arity_;
  std::vector<Complex> entries_;
  std::vector<std::size_t> active_;
  std::vector<Complex> block_;
};

struct MeasureResult {
  std::size_t qubit = 0;
  int outcome = 0;
  /// Born probability of `outcome` before collapse.
  double probability = 0.0;
};

class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(std::size_t num_qubits);
  /// Throws ValidationError unless the size is a power of two and the norm is
  /// one within kTolerance.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);
  static StateVector basis(std::size_t num_qubits, std::uint64_t index);
  /// Haar-ish random state (normalized complex Gaussian entries).
  static StateVector random(std::size_t num_qubits, std::mt19937_64& rng);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t index) const { return amplitudes_[index]; }

  double norm_squared() const;

  /// Applies `gate` to `targets` (targets[0] is the gate's most significant
  /// qubit). Throws AddressError on duplicate or out-of-range targets and
  /// ValidationError on an arity mismatch.
  void apply(const GateMatrix& gate, std::span<const std::size_t> targets);
  void apply(const GateMatrix& gate, std::initializer_list<std::size_t> targets) {
    apply(gate, std::span<const std::size_t>(targets.begin(), targets.size()));
  }

  double probability_of_one(std::size_t qubit) const;

  /// Standard-basis measurement with Born sampling.
  MeasureResult measure(std::size_t qubit, std::mt19937_64& rng);
  /// Measurement with the outcome forced; throws ImpossibleBranchError when the
  /// forced outcome has probability <= kZeroAmplitude.
  MeasureResult measure_forced(std::size_t qubit, int outcome);

  /// Appends `other` as the least significant qubits (this ⊗ other).
  StateVector tensor(const StateVector& other) const;

  std::size_t bit_position(std::size_t qubit) const { return num_qubits_ - 1 - qubit; }

 private:
  StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);
  void check_qubit(std::size_t qubit) const;
  std::pair<double, double> branch_weights(std::size_t qubit) const;
  void collapse(std::size_t qubit, int outcome, double weight);

  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Free-function form: returns a new state.
StateVector apply_gate(StateVector state, const GateMatrix& gate,
                       std::span<const std::size_t> targets);

/// |<a|b>|; equals 1 iff the states agree up to a global phase.
double fidelity_up_to_global_phase(const StateVector& a, const StateVector& b);

/// True iff `qubit` is in |expected> with certainty: every amplitude with the
/// opposite bit has magnitude below kTolerance.
bool partial_state_check(const StateVector& state, std::size_t qubit, int expected);

/// True iff the listed qubits hold (|0..0> + |1..1>)/sqrt(2) in tensor product
/// with the remaining qubits.
bool is_cat_state(const StateVector& state, std::span<const std::size_t> qubits);

/// True iff every non-negligible amplitude has all listed qubits equal, i.e.
/// the qubits form a cat-like group a|0..0>|x> + b|1..1>|y>.
bool is_cat_like(const StateVector& state, std::span<const std::size_t> qubits);

/// The reduced pure state on `keep` (in that order), provided every other
/// qubit is in a definite basis state. Throws PreconditionError otherwise.
StateVector restrict_to(const StateVector& state, std::span<const std::size_t> keep);

}  // namespace distq

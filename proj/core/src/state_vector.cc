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

#include "distq/state_vector.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "distq/errors.h"

namespace distq {
namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t log2_exact(std::size_t v) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < v) ++n;
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// GateMatrix

GateMatrix::GateMatrix(std::size_t arity, std::vector<Complex> entries)
    : arity_(arity), entries_(std::move(entries)) {
  const std::size_t d = dim();
  if (arity_ > 16 || entries_.size() != d * d) {
    throw ValidationError("gate matrix of arity " + std::to_string(arity_) + " needs " +
                          std::to_string(d * d) + " entries, got " +
                          std::to_string(entries_.size()));
  }
  // Indices whose row or column differs from the identity; every other
  // index is left alone by the gate.
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t c = 0; c < d; ++c) {
      const Complex id = j == c ? Complex(1.0) : Complex(0.0);
      if (entries_[j * d + c] != id || entries_[c * d + j] != id) {
        active_.push_back(j);
        break;
      }
    }
  }
  const std::size_t a = active_.size();
  block_.resize(a * a);
  for (std::size_t r = 0; r < a; ++r)
    for (std::size_t c = 0; c < a; ++c) block_[r * a + c] = entries_[active_[r] * d + active_[c]];
  // B^dagger B = I on the active block is equivalent to unitarity.
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = i; j < a; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < a; ++k) acc += std::conj(block_[k * a + i]) * block_[k * a + j];
      const Complex expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(acc - expected) > kTolerance) {
        throw ValidationError("gate matrix is not unitary");
      }
    }
  }
}

GateMatrix GateMatrix::adjoint() const {
  const std::size_t d = dim();
  std::vector<Complex> out(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out[c * d + r] = std::conj(entries_[r * d + c]);
  return GateMatrix(arity_, std::move(out));
}

GateMatrix GateMatrix::operator*(const GateMatrix& rhs) const {
  if (rhs.arity_ != arity_) throw ValidationError("matrix product of different arities");
  const std::size_t d = dim();
  std::vector<Complex> out(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex a = entries_[r * d + k];
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < d; ++c) out[r * d + c] += a * rhs.entries_[k * d + c];
    }
  return GateMatrix(arity_, std::move(out));
}

GateMatrix GateMatrix::tensor(const GateMatrix& rhs) const {
  const std::size_t da = dim();
  const std::size_t db = rhs.dim();
  const std::size_t d = da * db;
  std::vector<Complex> out(d * d);
  for (std::size_t ra = 0; ra < da; ++ra)
    for (std::size_t ca = 0; ca < da; ++ca) {
      const Complex a = entries_[ra * da + ca];
      for (std::size_t rb = 0; rb < db; ++rb)
        for (std::size_t cb = 0; cb < db; ++cb)
          out[(ra * db + rb) * d + (ca * db + cb)] = a * rhs.entries_[rb * db + cb];
    }
  return GateMatrix(arity_ + rhs.arity_, std::move(out));
}

bool GateMatrix::approx_equal(const GateMatrix& other, double tol) const {
  if (other.arity_ != arity_) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (std::abs(entries_[i] - other.entries_[i]) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t num_qubits)
    : num_qubits_(num_qubits), amplitudes_(std::size_t{1} << num_qubits) {
  if (num_qubits > 30) throw ValidationError("too many qubits for a dense state");
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  if (!is_power_of_two(amplitudes.size())) {
    throw ValidationError("state dimension " + std::to_string(amplitudes.size()) +
                          " is not a power of two");
  }
  const std::size_t n = log2_exact(amplitudes.size());
  StateVector s(n, std::move(amplitudes));
  if (std::abs(s.norm_squared() - 1.0) > kTolerance) {
    throw ValidationError("state is not normalized");
  }
  return s;
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dim()) throw AddressError("basis index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

StateVector StateVector::random(std::size_t num_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  double norm = 0.0;
  for (auto& a : amps) {
    a = Complex(gauss(rng), gauss(rng));
    norm += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : amps) a *= scale;
  return StateVector(num_qubits, std::move(amps));
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amplitudes_) acc += std::norm(a);
  return acc;
}

void StateVector::check_qubit(std::size_t qubit) const {
  if (qubit >= num_qubits_) {
    throw AddressError("qubit " + std::to_string(qubit) + " out of range for " +
                       std::to_string(num_qubits_) + "-qubit state");
  }
}

void StateVector::apply(const GateMatrix& gate, std::span<const std::size_t> targets) {
  const std::size_t k = targets.size();
  if (gate.arity() != k) {
    throw ValidationError("gate arity " + std::to_string(gate.arity()) + " does not match " +
                          std::to_string(k) + " targets");
  }
  std::size_t mask = 0;
  for (std::size_t t : targets) {
    check_qubit(t);
    const std::size_t bit = std::size_t{1} << bit_position(t);
    if (mask & bit) throw AddressError("duplicate target qubit " + std::to_string(t));
    mask |= bit;
  }
  const auto active = gate.active_indices();
  const std::size_t a = active.size();
  if (a == 0) return;
  const auto block = gate.active_block();
  // Basis offset for each active local index (target 0 is the MSB).
  thread_local std::vector<std::size_t> offsets;
  thread_local std::vector<double> in_re;
  thread_local std::vector<double> in_im;
  offsets.assign(a, 0);
  in_re.resize(a);
  in_im.resize(a);
  for (std::size_t j = 0; j < a; ++j)
    for (std::size_t i = 0; i < k; ++i)
      if (active[j] & (std::size_t{1} << (k - 1 - i))) offsets[j] |= std::size_t{1} << bit_position(targets[i]);

  // Visit every index with the target bits clear: adding one with the target
  // bits pre-set carries straight past them.
  const std::size_t size = amplitudes_.size();
  for (std::size_t base = 0; base < size; base = ((base | mask) + 1) & ~mask) {
    for (std::size_t j = 0; j < a; ++j) {
      const Complex v = amplitudes_[base | offsets[j]];
      in_re[j] = v.real();
      in_im[j] = v.imag();
    }
    for (std::size_t r = 0; r < a; ++r) {
      double re = 0.0, im = 0.0;
      const Complex* row = &block[r * a];
      for (std::size_t c = 0; c < a; ++c) {
        re += row[c].real() * in_re[c] - row[c].imag() * in_im[c];
        im += row[c].real() * in_im[c] + row[c].imag() * in_re[c];
      }
      amplitudes_[base | offsets[r]] = Complex(re, im);
    }
  }
}

double StateVector::probability_of_one(std::size_t qubit) const {
  check_qubit(qubit);
  const std::size_t bit = std::size_t{1} << bit_position(qubit);
  double p = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i)
    if (i & bit) p += std::norm(amplitudes_[i]);
  return p;
}

std::pair<double, double> StateVector::branch_weights(std::size_t qubit) const {
  check_qubit(qubit);
  const std::size_t bit = std::size_t{1} << bit_position(qubit);
  double w0 = 0.0;
  double w1 = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & bit) {
      w1 += std::norm(amplitudes_[i]);
    } else {
      w0 += std::norm(amplitudes_[i]);
    }
  }
  return {w0, w1};
}

void StateVector::collapse(std::size_t qubit, int outcome, double weight) {
  // Dividing by the kept weight (not by the probability) keeps rounding
  // errors from compounding over long measurement sequences.
  const std::size_t bit = std::size_t{1} << bit_position(qubit);
  const double scale = 1.0 / std::sqrt(weight);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    const bool one = (i & bit) != 0;
    if (one == (outcome == 1)) {
      amplitudes_[i] *= scale;
    } else {
      amplitudes_[i] = 0.0;
    }
  }
}

MeasureResult StateVector::measure(std::size_t qubit, std::mt19937_64& rng) {
  const auto [w0, w1] = branch_weights(qubit);
  const double total = w0 + w1;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  int outcome = uniform(rng) * total < w1 ? 1 : 0;
  // Guard against sampling a branch that only exists through rounding.
  if (outcome == 1 && w1 / total <= kZeroAmplitude) outcome = 0;
  if (outcome == 0 && w0 / total <= kZeroAmplitude) outcome = 1;
  const double w = outcome == 1 ? w1 : w0;
  collapse(qubit, outcome, w);
  return {qubit, outcome, w / total};
}

MeasureResult StateVector::measure_forced(std::size_t qubit, int outcome) {
  if (outcome != 0 && outcome != 1) throw ValidationError("forced outcome must be 0 or 1");
  const auto [w0, w1] = branch_weights(qubit);
  const double w = outcome == 1 ? w1 : w0;
  const double p = w / (w0 + w1);
  if (p <= kZeroAmplitude) {
    throw ImpossibleBranchError("forced outcome " + std::to_string(outcome) + " on qubit " +
                                std::to_string(qubit) + " has probability " + std::to_string(p));
  }
  collapse(qubit, outcome, w);
  return {qubit, outcome, p};
}

StateVector StateVector::tensor(const StateVector& other) const {
  std::vector<Complex> out(dim() * other.dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < other.dim(); ++j)
      out[i * other.dim() + j] = amplitudes_[i] * other.amplitudes_[j];
  return StateVector(num_qubits_ + other.num_qubits_, std::move(out));
}

// ---------------------------------------------------------------------------
// Free functions

StateVector apply_gate(StateVector state, const GateMatrix& gate,
                       std::span<const std::size_t> targets) {
  state.apply(gate, targets);
  return state;
}

double fidelity_up_to_global_phase(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ValidationError("fidelity of states with " + std::to_string(a.num_qubits()) + " and " +
                          std::to_string(b.num_qubits()) + " qubits");
  }
  Complex inner = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) inner += std::conj(a[i]) * b[i];
  return std::abs(inner);
}

bool partial_state_check(const StateVector& state, std::size_t qubit, int expected) {
  if (qubit >= state.num_qubits()) throw AddressError("qubit out of range");
  const std::size_t bit = std::size_t{1} << state.bit_position(qubit);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const bool one = (i & bit) != 0;
    if (one != (expected == 1) && std::norm(state[i]) > kTolerance * kTolerance) return false;
  }
  return true;
}

namespace {

std::size_t qubit_mask(const StateVector& state, std::span<const std::size_t> qubits) {
  std::size_t mask = 0;
  for (std::size_t q : qubits) {
    if (q >= state.num_qubits()) throw AddressError("qubit out of range");
    mask |= std::size_t{1} << state.bit_position(q);
  }
  return mask;
}

}  // namespace

bool is_cat_state(const StateVector& state, std::span<const std::size_t> qubits) {
  if (qubits.empty()) return false;
  const std::size_t mask = qubit_mask(state, qubits);
  double weight = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const std::size_t sel = i & mask;
    if (sel == 0) {
      const Complex a0 = state[i];
      const Complex a1 = state[i | mask];
      if (std::norm(a0 - a1) > kTolerance * kTolerance) return false;
      weight += std::norm(a0);
    } else if (sel != mask && std::norm(state[i]) > kTolerance * kTolerance) {
      return false;
    }
  }
  return std::abs(weight - 0.5) <= kTolerance;
}

bool is_cat_like(const StateVector& state, std::span<const std::size_t> qubits) {
  const std::size_t mask = qubit_mask(state, qubits);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const std::size_t sel = i & mask;
    if (sel != 0 && sel != mask && std::norm(state[i]) > kTolerance * kTolerance) return false;
  }
  return true;
}

StateVector restrict_to(const StateVector& state, std::span<const std::size_t> keep) {
  const std::size_t keep_mask = qubit_mask(state, keep);
  if (static_cast<std::size_t>(std::popcount(keep_mask)) != keep.size()) {
    throw AddressError("duplicate qubit in restriction list");
  }
  std::size_t base = 0;
  for (std::size_t q = 0; q < state.num_qubits(); ++q) {
    const std::size_t bit = std::size_t{1} << state.bit_position(q);
    if (keep_mask & bit) continue;
    if (partial_state_check(state, q, 1)) {
      base |= bit;
    } else if (!partial_state_check(state, q, 0)) {
      throw PreconditionError("qubit " + std::to_string(q) +
                              " is not in a definite basis state; cannot restrict");
    }
  }
  const std::size_t k = keep.size();
  std::vector<Complex> out(std::size_t{1} << k);
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::size_t index = base;
    for (std::size_t i = 0; i < k; ++i)
      if (j & (std::size_t{1} << (k - 1 - i))) index |= std::size_t{1} << state.bit_position(keep[i]);
    out[j] = state[index];
  }
  return StateVector::from_amplitudes(std::move(out));
}

}  // namespace distq

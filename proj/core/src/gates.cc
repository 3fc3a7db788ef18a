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

#include "distq/gates.h"

#include <cmath>
#include <numbers>

#include "distq/errors.h"

namespace distq {
namespace gates {
namespace {

GateMatrix permutation(std::size_t arity, const std::vector<std::size_t>& image) {
  const std::size_t d = std::size_t{1} << arity;
  std::vector<Complex> m(d * d);
  for (std::size_t col = 0; col < d; ++col) m[image[col] * d + col] = 1.0;
  return GateMatrix(arity, std::move(m));
}

}  // namespace

const GateMatrix& identity1() {
  static const GateMatrix g(1, {1.0, 0.0, 0.0, 1.0});
  return g;
}

const GateMatrix& pauli_x() {
  static const GateMatrix g(1, {0.0, 1.0, 1.0, 0.0});
  return g;
}

const GateMatrix& pauli_z() {
  static const GateMatrix g(1, {1.0, 0.0, 0.0, -1.0});
  return g;
}

const GateMatrix& hadamard() {
  static const double h = 1.0 / std::sqrt(2.0);
  static const GateMatrix g(1, {h, h, h, -h});
  return g;
}

const GateMatrix& cnot() {
  static const GateMatrix g = permutation(2, {0, 1, 3, 2});
  return g;
}

const GateMatrix& toffoli() {
  static const GateMatrix g = permutation(3, {0, 1, 2, 3, 4, 5, 7, 6});
  return g;
}

const GateMatrix& swap() {
  static const GateMatrix g = permutation(2, {0, 2, 1, 3});
  return g;
}

GateMatrix identity(std::size_t arity) {
  const std::size_t d = std::size_t{1} << arity;
  std::vector<Complex> m(d * d);
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
  return GateMatrix(arity, std::move(m));
}

GateMatrix single_qubit(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return GateMatrix(1, {c, -std::polar(s, lambda), std::polar(s, phi), std::polar(c, phi + lambda)});
}

GateMatrix random_unitary(std::size_t arity, std::mt19937_64& rng) {
  const std::size_t d = std::size_t{1} << arity;
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Columns by modified Gram-Schmidt.
  std::vector<std::vector<Complex>> cols(d, std::vector<Complex>(d));
  for (auto& col : cols)
    for (auto& v : col) v = Complex(gauss(rng), gauss(rng));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      Complex dot = 0.0;
      for (std::size_t r = 0; r < d; ++r) dot += std::conj(cols[i][r]) * cols[j][r];
      for (std::size_t r = 0; r < d; ++r) cols[j][r] -= dot * cols[i][r];
    }
    double norm = 0.0;
    for (const auto& v : cols[j]) norm += std::norm(v);
    norm = std::sqrt(norm);
    for (auto& v : cols[j]) v /= norm;
  }
  std::vector<Complex> m(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m[r * d + c] = cols[c][r];
  return GateMatrix(arity, std::move(m));
}

}  // namespace gates

GateMatrix add_controls(const GateMatrix& gate, std::size_t num_controls) {
  const std::size_t inner = gate.dim();
  const std::size_t arity = gate.arity() + num_controls;
  const std::size_t d = std::size_t{1} << arity;
  std::vector<Complex> m(d * d);
  const std::size_t offset = d - inner;
  for (std::size_t i = 0; i < offset; ++i) m[i * d + i] = 1.0;
  for (std::size_t r = 0; r < inner; ++r)
    for (std::size_t c = 0; c < inner; ++c) m[(offset + r) * d + offset + c] = gate(r, c);
  return GateMatrix(arity, std::move(m));
}

GateMatrix make_controlled(const ControlledSpec& spec) {
  if (spec.base.arity() != 1) {
    throw ValidationError("controlled base must act on one qubit");
  }
  return add_controls(spec.base, spec.num_controls);
}

GateMatrix make_rk(int k) {
  if (k < 1) throw ValidationError("R_k needs k >= 1, got " + std::to_string(k));
  const double angle = 2.0 * std::numbers::pi / std::ldexp(1.0, k);
  return GateMatrix(1, {1.0, 0.0, 0.0, std::polar(1.0, angle)});
}

std::vector<std::vector<CnotStep>> em_schedule(std::size_t m, EmShape shape) {
  std::vector<std::vector<CnotStep>> rounds;
  if (m < 2) return rounds;
  if (shape == EmShape::kLinear) {
    for (std::size_t t = 0; t + 1 < m; ++t) rounds.push_back({{t, t + 1}});
    return rounds;
  }
  std::size_t entangled = 1;
  while (entangled < m) {
    std::vector<CnotStep> round;
    const std::size_t fanout = std::min(entangled, m - entangled);
    for (std::size_t i = 0; i < fanout; ++i) round.push_back({i, entangled + i});
    entangled += fanout;
    rounds.push_back(std::move(round));
  }
  return rounds;
}

std::size_t local_entangle_em(StateVector& state, std::span<const std::size_t> qubits,
                              EmShape shape) {
  if (qubits.empty()) throw ParameterError("E_m needs at least one qubit");
  for (std::size_t q : qubits) {
    if (!partial_state_check(state, q, 0)) {
      throw PreconditionError("qubit " + std::to_string(q) + " must be |0> before entangling");
    }
  }
  state.apply(gates::hadamard(), {qubits[0]});
  const auto rounds = em_schedule(qubits.size(), shape);
  for (const auto& round : rounds)
    for (const auto& step : round) state.apply(gates::cnot(), {qubits[step.control], qubits[step.target]});
  return rounds.size();
}

}  // namespace distq

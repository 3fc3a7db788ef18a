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

#include <stdexcept>
#include <string>

namespace distq {

/// Base class for every error raised by the library. Each subclass names one
/// failure category so callers and tests can catch precisely.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DISTQ_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// Bad qubit index or unresolvable address.
DISTQ_DEFINE_ERROR(AddressError);
// Malformed input value (non-unitary matrix, dimension mismatch, ...).
DISTQ_DEFINE_ERROR(ValidationError);
// Forced measurement outcome with (near) zero Born probability.
DISTQ_DEFINE_ERROR(ImpossibleBranchError);
// A quantum precondition does not hold (e.g. a qubit is not in |0>).
DISTQ_DEFINE_ERROR(PreconditionError);
// Multi-qubit operation spanning more than one node.
DISTQ_DEFINE_ERROR(LocalityError);
// Operation on the wrong qubit pool.
DISTQ_DEFINE_ERROR(PoolError);
// Not enough channel qubits, slots or register space.
DISTQ_DEFINE_ERROR(CapacityError);
// Classical bit used at a node that never received it.
DISTQ_DEFINE_ERROR(CausalityError);
// No shared entanglement available.
DISTQ_DEFINE_ERROR(ResourceError);
// Invalid argument combination.
DISTQ_DEFINE_ERROR(ParameterError);
// Qubits expected to share a cat or cat-like state do not.
DISTQ_DEFINE_ERROR(InvalidEntanglementError);
// A channel qubit cannot be reset (unknown state, missing record).
DISTQ_DEFINE_ERROR(CannotResetError);
// Parallel parts or batched operations overlap.
DISTQ_DEFINE_ERROR(DisjointnessError);
// Output could not be written.
DISTQ_DEFINE_ERROR(IoError);

#undef DISTQ_DEFINE_ERROR

}  // namespace distq

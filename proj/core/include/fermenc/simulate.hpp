// Copyright 2026 The fermenc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "fermenc/circuit.hpp"
#include "fermenc/phase.hpp"

namespace fermenc {

// Every gate in the IR maps basis states to basis states up to a power of
// i, so the simulator state is one bit assignment plus a quarter phase.
struct BasisPhaseState {
  std::vector<uint8_t> bits;
  QuarterPhase phase;
  bool operator==(const BasisPhaseState&) const = default;
};

// Applies one gate in place. Macro gates use their registered semantics.
void apply_gate(const Gate& g, std::vector<uint8_t>& bits, QuarterPhase& phase);

BasisPhaseState simulate(const Circuit& c, BasisPhaseState s);

// Global indices of the non-ancilla qubits, in register order.
std::vector<Qubit> data_qubits(const Circuit& c);

// Runs the circuit with the given bits in the data registers and zeros in
// the ancilla registers; ancillas_clean reports whether every ancilla
// returned to zero.
struct DataRun {
  std::vector<uint8_t> data;
  QuarterPhase phase;
  bool ancillas_clean = true;
};
DataRun run_on_data(const Circuit& c, const std::vector<uint8_t>& data);

}  // namespace fermenc

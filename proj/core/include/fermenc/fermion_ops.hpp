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

#include <complex>
#include <vector>

#include "fermenc/circuit.hpp"
#include "fermenc/encoding.hpp"
#include "fermenc/fock.hpp"
#include "fermenc/phase.hpp"

namespace fermenc {

// Ordered product of distinct Majorana operator indices in 1..2*modes.
// gamma_{2j-1} = a_j + a_j^dag, gamma_{2j} = i(a_j - a_j^dag); both square to
// the identity on the occupation basis.
struct MajoranaProduct {
  std::vector<int> indices;
};

// exp(i * theta * U) for an involutory generator U given as an even-length
// Majorana product (phase-normalized so U^2 = I).
struct RotationSpec {
  MajoranaProduct generator;
  double theta = 0.0;
};

// A circuit together with the scalar i^k factored out of its gate list.
struct CompiledOperator {
  Circuit circuit;
  QuarterPhase phase;
};

// Circuit for gamma_mu over enc's layout: the phase query for the preceding
// modes followed by the occupation flip, with the i of an even index tracked
// in .phase. Simulating .circuit on encode(b) and multiplying by .phase
// reproduces majorana_oracle(mu, b) exactly.
CompiledOperator compile_majorana(const Encoding& enc, int mu);

// Product of Majoranas, rightmost factor applied first. Phases of all even
// indices accumulate in .phase.
CompiledOperator compile_majorana_product(const Encoding& enc,
                                          const MajoranaProduct& v);

// Rotation sandwich on one extra "rot" ancilla: H, controlled-U, H, Rz(2t),
// H, controlled-U, H. Only the state-moving gates of U carry the control;
// compute/uncompute scratch runs uncontrolled. The i^k of the generator is
// folded into explicit S gates on the control wire.
// Pre: generator has even length and distinct indices.
Circuit compile_rotation(const Encoding& enc, const RotationSpec& spec);

// One branch of a rotation output in encoded data bits.
struct RotationBranch {
  std::complex<double> amplitude;
  std::vector<uint8_t> data;
};

// Analytic action exp(i*theta*U)|data> = cos(theta)|data> + i*sin(theta)*
// U|data>, computed exactly from the compiled generator; branches on the
// same state merge. Throws if U maps the state outside the promise.
std::vector<RotationBranch> evaluate_rotation(const Encoding& enc,
                                              const RotationSpec& spec,
                                              const std::vector<uint8_t>& data);

enum class SelectOp { sgn_rank, bit_flip };

// Indexed query: data registers plus a trailing "idx" register carrying j-1.
Circuit compile_select(const Encoding& enc, SelectOp op);

// Weight band F-k .. F+k admitted while a k-local operator is applied
// factor by factor.
Capacity capacity_for(int k_locality, int fermions);

// Inlines body into b under the given controls, mapping body's qubit q to
// operand_map[q]. Scratch-tagged gates stay uncontrolled; body's ancilla
// register is served from borrowed pool qubits.
void apply_controlled(CircuitBuilder& b, const Circuit& body,
                      const std::vector<Control>& controls,
                      const std::vector<Qubit>& operand_map);

}  // namespace fermenc

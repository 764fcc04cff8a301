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

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "fermenc/circuit.hpp"

namespace fermenc {

// A (possibly non-contiguous) ordered group of qubits, least significant
// bit first for arithmetic registers.
using Wires = std::vector<Qubit>;

inline Wires contiguous(Qubit start, uint32_t width) {
  Wires w(width);
  for (uint32_t i = 0; i < width; ++i) w[i] = start + i;
  return w;
}

// Builds a circuit incrementally. Scratch qubits come from a shared pool
// that materializes as a trailing ancilla register sized to the high-water
// mark; pool qubits hold provisional ids until finalize().
class CircuitBuilder {
 public:
  CircuitBuilder() = default;

  Wires add_register(const std::string& name, uint32_t width, bool ancilla = false);

  // Pool scratch. Borrowed qubits must be returned to |0> before release.
  Qubit borrow();
  Wires borrow_many(uint32_t n);
  void release(Qubit q);
  void release_many(const Wires& w);

  // Raw appends.
  void x(Qubit t);
  void z(Qubit t);
  void s(Qubit t);
  void swap(Qubit a, Qubit b);
  void cz(Qubit a, Qubit b);
  void cx(Qubit c, Qubit t, bool closed = true);
  void mcx(const std::vector<Control>& cs, Qubit t);
  void mcx_multi(const std::vector<Control>& cs, const Wires& targets);
  void macro(const std::string& name, std::vector<int64_t> params, Wires operands);
  void append(Gate g);
  void append_circuit(const Circuit& c);  // same qubit space

  // Gates emitted while a scratch section is open are tagged scratch.
  void begin_scratch();
  void end_scratch();
  bool in_scratch() const { return scratch_depth_ > 0; }

  uint32_t pool_high_water() const { return pool_high_water_; }

  // Access to not-yet-finalized gates; macro lowering patches controls in.
  size_t pending_count() const { return gates_.size(); }
  Gate& pending_gate(size_t i) { return gates_[i]; }

  // Forgets released pool ids so later gates get fresh ancillas and stay
  // depth-parallel with earlier ones.
  void abandon_free_pool() { free_pool_.clear(); }

  // Resolves pool ids into a trailing "anc" register and returns the circuit.
  Circuit finalize();

 private:
  Qubit map_pool(Qubit q) const;

  Circuit circ_;
  std::vector<Gate> gates_;
  std::vector<Qubit> free_pool_;
  uint32_t pool_next_ = 0;
  uint32_t pool_high_water_ = 0;
  int scratch_depth_ = 0;
  bool finalized_ = false;
};

// RAII scratch section.
struct ScratchSection {
  explicit ScratchSection(CircuitBuilder& b) : b_(b) { b_.begin_scratch(); }
  ~ScratchSection() { b_.end_scratch(); }
  CircuitBuilder& b_;
};

// Provisional pool ids live above this base until finalize() remaps them.
inline constexpr Qubit kPoolBase = 1u << 30;

}  // namespace fermenc

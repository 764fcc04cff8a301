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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fermenc {

using Qubit = uint32_t;

enum class GateKind : uint8_t { X, Z, S, Swap, Cz, Mcx, Macro };

struct Control {
  Qubit qubit;
  bool closed = true;  // false: triggers on |0>
  bool operator==(const Control&) const = default;
};

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<Qubit> targets;
  std::vector<Control> controls;  // Mcx only
  // Scratch gates compute values that are later uncomputed; they stay
  // uncontrolled when the circuit is put under coherent control.
  bool scratch = false;
  // Macro payload.
  std::string name;
  std::vector<int64_t> params;

  bool operator==(const Gate&) const = default;
};

struct Register {
  std::string name;
  uint32_t width = 0;
  bool ancilla = false;  // must enter and leave |0...0>
};

struct GateCounts {
  std::map<std::string, uint64_t> by_kind;
  uint64_t total = 0;          // every gate
  uint64_t total_1q2q = 0;     // 1- and 2-qubit primitives
  uint64_t toffoli = 0;        // 3-qubit MCX after lowering
  uint64_t weighted_total = 0; // total_1q2q + kToffoliExpansion * toffoli
};

// Fixed constant used when folding Toffolis into 1q/2q totals (6 CX + 9
// single-qubit gates in the textbook decomposition).
inline constexpr uint64_t kToffoliExpansion = 15;

class Circuit {
 public:
  Circuit() = default;

  // Registers are laid out contiguously in declaration order.
  uint32_t add_register(const std::string& name, uint32_t width, bool ancilla = false);
  const std::vector<Register>& registers() const { return registers_; }
  uint32_t width() const { return width_; }
  uint32_t register_offset(size_t idx) const;
  std::optional<size_t> find_register(const std::string& name) const;

  void append(Gate g) { gates_.push_back(std::move(g)); }
  const std::vector<Gate>& gates() const { return gates_; }
  std::vector<Gate>& mutable_gates() { return gates_; }

  // Number of data (non-ancilla) qubits; ancilla registers count separately.
  uint32_t data_width() const;
  uint32_t ancilla_width() const;

  // Greedy ASAP layering by qubit disjointness.
  uint64_t depth() const;
  GateCounts gate_counts() const;

  // Reversed gate order, each gate inverted (S -> SSS, macros via registry).
  Circuit inverted() const;

 private:
  std::vector<Register> registers_;
  std::vector<uint32_t> offsets_;
  std::vector<Gate> gates_;
  uint32_t width_ = 0;
};

// All qubits a gate touches (targets + controls).
void gate_support(const Gate& g, std::vector<Qubit>& out);

}  // namespace fermenc

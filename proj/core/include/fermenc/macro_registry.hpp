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

#include <functional>
#include <string>
#include <vector>

#include "fermenc/circuit.hpp"

namespace fermenc {

class CircuitBuilder;

// A macro is a named gadget addressable from the circuit format. Expansion
// appends primitive gates acting on the macro's operand qubits; semantics is
// a direct classical action used by the simulator before lowering.
struct MacroDef {
  // Appends the expansion of (params, qubits) to the builder.
  std::function<void(CircuitBuilder&, const std::vector<int64_t>&,
                     const std::vector<Qubit>&)> expand;
  // In-place classical action on the bit vector (global indexing).
  std::function<void(const std::vector<int64_t>&, const std::vector<Qubit>&,
                     std::vector<uint8_t>&, int& phase)> apply;
  // Name/params of the inverse macro (all registered macros are self-inverse
  // or parameter-invertible).
  std::function<std::pair<std::string, std::vector<int64_t>>(
      const std::vector<int64_t>&)> invert;
  // Opaque macros (H, RZ) are leaf gates: no expansion, no classical action.
  bool opaque = false;
};

const MacroDef& macro_lookup(const std::string& name);
bool macro_exists(const std::string& name);
void macro_register(const std::string& name, MacroDef def);

// Registers the built-in arithmetic gadget macros (idempotent).
void register_builtin_macros();

}  // namespace fermenc

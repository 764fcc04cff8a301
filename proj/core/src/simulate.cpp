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

#include "fermenc/simulate.hpp"

#include <stdexcept>
#include <utility>

#include "fermenc/macro_registry.hpp"

namespace fermenc {

void apply_gate(const Gate& g, std::vector<uint8_t>& bits, QuarterPhase& phase) {
  switch (g.kind) {
    case GateKind::X:
      for (Qubit t : g.targets) bits[t] ^= 1;
      break;
    case GateKind::Z:
      if (bits[g.targets[0]]) phase *= QuarterPhase::minus_one();
      break;
    case GateKind::S:
      if (bits[g.targets[0]]) phase *= QuarterPhase::i();
      break;
    case GateKind::Swap:
      std::swap(bits[g.targets[0]], bits[g.targets[1]]);
      break;
    case GateKind::Cz:
      if (bits[g.targets[0]] && bits[g.targets[1]]) phase *= QuarterPhase::minus_one();
      break;
    case GateKind::Mcx:
      for (const auto& c : g.controls)
        if (bits[c.qubit] != (c.closed ? 1 : 0)) return;
      for (Qubit t : g.targets) bits[t] ^= 1;
      break;
    case GateKind::Macro: {
      // Scratch sections net to identity, so a controlled macro's overall
      // action is its registered action gated on the controls.
      for (const auto& c : g.controls)
        if (bits[c.qubit] != (c.closed ? 1 : 0)) return;
      const MacroDef& def = macro_lookup(g.name);
      if (!def.apply)
        throw std::invalid_argument("macro has no basis-state action: " + g.name);
      int ph = phase.exponent();
      def.apply(g.params, g.targets, bits, ph);
      phase = QuarterPhase(ph);
      break;
    }
  }
}

BasisPhaseState simulate(const Circuit& c, BasisPhaseState s) {
  if (s.bits.size() != c.width()) throw std::invalid_argument("state width mismatch");
  for (const auto& g : c.gates()) apply_gate(g, s.bits, s.phase);
  return s;
}

std::vector<Qubit> data_qubits(const Circuit& c) {
  std::vector<Qubit> out;
  const auto& regs = c.registers();
  for (size_t i = 0; i < regs.size(); ++i) {
    if (regs[i].ancilla) continue;
    uint32_t off = c.register_offset(i);
    for (uint32_t k = 0; k < regs[i].width; ++k) out.push_back(off + k);
  }
  return out;
}

DataRun run_on_data(const Circuit& c, const std::vector<uint8_t>& data) {
  auto dq = data_qubits(c);
  if (data.size() != dq.size()) throw std::invalid_argument("data width mismatch");
  BasisPhaseState s;
  s.bits.assign(c.width(), 0);
  for (size_t i = 0; i < dq.size(); ++i) s.bits[dq[i]] = data[i];
  s = simulate(c, std::move(s));

  DataRun r;
  r.phase = s.phase;
  r.data.resize(dq.size());
  std::vector<uint8_t> is_data(c.width(), 0);
  for (size_t i = 0; i < dq.size(); ++i) {
    r.data[i] = s.bits[dq[i]];
    is_data[dq[i]] = 1;
  }
  for (uint32_t q = 0; q < c.width(); ++q)
    if (!is_data[q] && s.bits[q]) {
      r.ancillas_clean = false;
      break;
    }
  return r;
}

}  // namespace fermenc

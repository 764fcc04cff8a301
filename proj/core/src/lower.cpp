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

#include "fermenc/lower.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include "fermenc/builder.hpp"
#include "fermenc/macro_registry.hpp"

namespace fermenc {
namespace {

bool gate_is_lowered(const Gate& g) {
  if (g.kind == GateKind::Macro) return macro_lookup(g.name).opaque;
  if (g.kind != GateKind::Mcx) return true;
  return g.controls.size() <= 2 && g.targets.size() == 1;
}

// Reduces the control literals to a single literal via pairwise CCX nodes.
// Appends the node gates to `nodes` in emission order so the caller can
// uncompute by replaying in reverse.
Control and_tree(CircuitBuilder& b, std::vector<Control> lits, std::vector<Gate>& nodes) {
  while (lits.size() > 1) {
    std::vector<Control> next;
    size_t i = 0;
    for (; i + 1 < lits.size(); i += 2) {
      Qubit q = b.borrow();
      Gate node{GateKind::Mcx, {q}, {lits[i], lits[i + 1]}};
      b.append(node);
      nodes.push_back(node);
      next.push_back({q, true});
    }
    if (i < lits.size()) next.push_back(lits[i]);
    lits = std::move(next);
  }
  return lits[0];
}

// Balanced fan-out of a literal's value onto fresh wires until `n` literal
// copies exist (the source counts as one).
std::vector<Control> fan_out(CircuitBuilder& b, Control src, size_t n,
                             std::vector<Gate>& nodes) {
  std::vector<Control> copies{src};
  while (copies.size() < n) {
    size_t have = copies.size();
    for (size_t i = 0; i < have && copies.size() < n; ++i) {
      Qubit q = b.borrow();
      Gate g{GateKind::Mcx, {q}, {copies[i]}};
      b.append(g);
      nodes.push_back(g);
      copies.push_back({q, true});
    }
  }
  return copies;
}

void lower_mcx(CircuitBuilder& b, const Gate& g) {
  if (g.controls.empty()) {
    for (Qubit t : g.targets) b.x(t);
    return;
  }
  std::vector<Gate> nodes;
  Control lit = g.controls.size() == 1 ? g.controls[0]
                                       : and_tree(b, g.controls, nodes);
  if (g.targets.size() == 1) {
    b.mcx({lit}, g.targets[0]);
  } else {
    auto copies = fan_out(b, lit, g.targets.size(), nodes);
    for (size_t i = 0; i < g.targets.size(); ++i) b.mcx({copies[i]}, g.targets[i]);
  }
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) b.append(*it);
}

Circuit lower_pass(const Circuit& c, bool& changed) {
  CircuitBuilder b;
  for (const auto& r : c.registers()) b.add_register(r.name, r.width, r.ancilla);
  for (const auto& g : c.gates()) {
    if (gate_is_lowered(g)) {
      b.append(g);
      continue;
    }
    changed = true;
    size_t start = b.pending_count();
    if (g.kind == GateKind::Macro) {
      macro_lookup(g.name).expand(b, g.params, g.targets);
      // A controlled macro controls only its payload gates; compute and
      // uncompute sections are tagged scratch by the expansion and run
      // unconditionally.
      if (!g.controls.empty()) {
        for (size_t i = start; i < b.pending_count(); ++i) {
          Gate& pg = b.pending_gate(i);
          if (pg.scratch) continue;
          if (pg.kind == GateKind::X) pg.kind = GateKind::Mcx;
          if (pg.kind != GateKind::Mcx && pg.kind != GateKind::Macro)
            throw std::logic_error("macro payload gate is not controllable: " + g.name);
          pg.controls.insert(pg.controls.end(), g.controls.begin(), g.controls.end());
        }
      }
    } else {
      lower_mcx(b, g);
    }
    // The outer tag goes on after control patching so a scratch-context
    // macro keeps its internal payload distinction while being patched.
    if (g.scratch)
      for (size_t i = start; i < b.pending_count(); ++i) b.pending_gate(i).scratch = true;
    b.abandon_free_pool();
  }
  return b.finalize();
}

}  // namespace

bool is_lowered(const Circuit& c) {
  for (const auto& g : c.gates())
    if (!gate_is_lowered(g)) return false;
  return true;
}

Circuit lower(const Circuit& c) {
  register_builtin_macros();
  Circuit cur = c;
  for (int pass = 0; pass < 16; ++pass) {
    bool changed = false;
    Circuit next = lower_pass(cur, changed);
    if (!changed) return cur;
    cur = std::move(next);
  }
  if (!is_lowered(cur)) throw std::runtime_error("macro expansion did not terminate");
  return cur;
}

}  // namespace fermenc

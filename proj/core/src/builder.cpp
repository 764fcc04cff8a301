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

#include "fermenc/builder.hpp"

#include <stdexcept>

namespace fermenc {

Wires CircuitBuilder::add_register(const std::string& name, uint32_t width, bool ancilla) {
  if (finalized_) throw std::logic_error("builder already finalized");
  uint32_t off = circ_.add_register(name, width, ancilla);
  return contiguous(off, width);
}

Qubit CircuitBuilder::borrow() {
  if (!free_pool_.empty()) {
    Qubit q = free_pool_.back();
    free_pool_.pop_back();
    return q;
  }
  Qubit q = kPoolBase + pool_next_;
  ++pool_next_;
  pool_high_water_ = std::max(pool_high_water_, pool_next_);
  return q;
}

Wires CircuitBuilder::borrow_many(uint32_t n) {
  Wires w(n);
  for (uint32_t i = 0; i < n; ++i) w[i] = borrow();
  return w;
}

void CircuitBuilder::release(Qubit q) {
  if (q < kPoolBase) throw std::logic_error("release of non-pool qubit");
  free_pool_.push_back(q);
}

void CircuitBuilder::release_many(const Wires& w) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) release(*it);
}

void CircuitBuilder::append(Gate g) {
  if (scratch_depth_ > 0) g.scratch = true;
  gates_.push_back(std::move(g));
}

void CircuitBuilder::x(Qubit t) { append({GateKind::X, {t}, {}}); }
void CircuitBuilder::z(Qubit t) { append({GateKind::Z, {t}, {}}); }
void CircuitBuilder::s(Qubit t) { append({GateKind::S, {t}, {}}); }
void CircuitBuilder::swap(Qubit a, Qubit b) { append({GateKind::Swap, {a, b}, {}}); }
void CircuitBuilder::cz(Qubit a, Qubit b) { append({GateKind::Cz, {a, b}, {}}); }

void CircuitBuilder::cx(Qubit c, Qubit t, bool closed) {
  append({GateKind::Mcx, {t}, {{c, closed}}});
}

void CircuitBuilder::mcx(const std::vector<Control>& cs, Qubit t) {
  append({GateKind::Mcx, {t}, cs});
}

void CircuitBuilder::mcx_multi(const std::vector<Control>& cs, const Wires& targets) {
  append({GateKind::Mcx, targets, cs});
}

void CircuitBuilder::macro(const std::string& name, std::vector<int64_t> params,
                           Wires operands) {
  Gate g;
  g.kind = GateKind::Macro;
  g.name = name;
  g.params = std::move(params);
  g.targets = std::move(operands);
  append(std::move(g));
}

void CircuitBuilder::append_circuit(const Circuit& c) {
  for (const auto& g : c.gates()) append(g);
}

void CircuitBuilder::begin_scratch() { ++scratch_depth_; }

void CircuitBuilder::end_scratch() {
  if (scratch_depth_ <= 0) throw std::logic_error("unbalanced scratch section");
  --scratch_depth_;
}

Qubit CircuitBuilder::map_pool(Qubit q) const {
  if (q < kPoolBase) return q;
  return circ_.width() - pool_high_water_ + (q - kPoolBase);
}

Circuit CircuitBuilder::finalize() {
  if (finalized_) throw std::logic_error("builder already finalized");
  if (scratch_depth_ != 0) throw std::logic_error("unbalanced scratch section");
  finalized_ = true;
  if (pool_high_water_ > 0) {
    // Re-finalized circuits (lowering passes) already carry an "anc"
    // register; pick a fresh name so the register table stays unambiguous.
    std::string name = "anc";
    int n = 1;
    while (circ_.find_register(name).has_value())
      name = "anc" + std::to_string(++n);
    circ_.add_register(name, pool_high_water_, true);
  }
  for (auto& g : gates_) {
    for (auto& t : g.targets) t = map_pool(t);
    for (auto& c : g.controls) c.qubit = map_pool(c.qubit);
    circ_.append(std::move(g));
  }
  gates_.clear();
  return std::move(circ_);
}

}  // namespace fermenc

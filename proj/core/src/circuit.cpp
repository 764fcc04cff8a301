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

#include "fermenc/circuit.hpp"

#include <algorithm>
#include <stdexcept>

#include "fermenc/macro_registry.hpp"

namespace fermenc {

uint32_t Circuit::add_register(const std::string& name, uint32_t width, bool ancilla) {
  offsets_.push_back(width_);
  registers_.push_back({name, width, ancilla});
  width_ += width;
  return offsets_.back();
}

uint32_t Circuit::register_offset(size_t idx) const {
  return offsets_.at(idx);
}

std::optional<size_t> Circuit::find_register(const std::string& name) const {
  for (size_t i = 0; i < registers_.size(); ++i)
    if (registers_[i].name == name) return i;
  return std::nullopt;
}

uint32_t Circuit::data_width() const {
  uint32_t w = 0;
  for (const auto& r : registers_)
    if (!r.ancilla) w += r.width;
  return w;
}

uint32_t Circuit::ancilla_width() const {
  return width_ - data_width();
}

void gate_support(const Gate& g, std::vector<Qubit>& out) {
  out.clear();
  out.insert(out.end(), g.targets.begin(), g.targets.end());
  for (const auto& c : g.controls) out.push_back(c.qubit);
}

uint64_t Circuit::depth() const {
  std::vector<uint64_t> ready(width_, 0);
  uint64_t depth = 0;
  std::vector<Qubit> support;
  for (const auto& g : gates_) {
    gate_support(g, support);
    uint64_t layer = 0;
    for (Qubit q : support) layer = std::max(layer, ready[q]);
    ++layer;
    for (Qubit q : support) ready[q] = layer;
    depth = std::max(depth, layer);
  }
  return depth;
}

GateCounts Circuit::gate_counts() const {
  GateCounts gc;
  for (const auto& g : gates_) {
    std::string key;
    size_t arity = 0;
    switch (g.kind) {
      case GateKind::X: key = "X"; arity = 1; break;
      case GateKind::Z: key = "Z"; arity = 1; break;
      case GateKind::S: key = "S"; arity = 1; break;
      case GateKind::Swap: key = "SWAP"; arity = 2; break;
      case GateKind::Cz: key = "CZ"; arity = 2; break;
      case GateKind::Mcx: {
        key = "MCX" + std::to_string(g.controls.size());
        arity = g.controls.size() + g.targets.size();
        break;
      }
      case GateKind::Macro: key = "MACRO:" + g.name; arity = 0; break;
    }
    ++gc.by_kind[key];
    ++gc.total;
    if (g.kind == GateKind::Mcx && g.controls.size() == 2 && g.targets.size() == 1) {
      ++gc.toffoli;
    } else if (arity >= 1 && arity <= 2) {
      ++gc.total_1q2q;
    }
  }
  gc.weighted_total = gc.total_1q2q + kToffoliExpansion * gc.toffoli;
  return gc;
}

namespace {

void append_inverse_of(const Gate& g, std::vector<Gate>& out) {
  switch (g.kind) {
    case GateKind::S: {
      for (int i = 0; i < 3; ++i) out.push_back(g);
      return;
    }
    case GateKind::Macro: {
      const auto& def = macro_lookup(g.name);
      auto [iname, iparams] = def.invert(g.params);
      Gate ig = g;
      ig.name = iname;
      ig.params = std::move(iparams);
      out.push_back(std::move(ig));
      return;
    }
    default:
      out.push_back(g);  // X, Z, Swap, Cz, Mcx are self-inverse
  }
}

}  // namespace

Circuit Circuit::inverted() const {
  Circuit inv;
  for (size_t i = 0; i < registers_.size(); ++i)
    inv.add_register(registers_[i].name, registers_[i].width, registers_[i].ancilla);
  auto& gs = inv.mutable_gates();
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it)
    append_inverse_of(*it, gs);
  return inv;
}

}  // namespace fermenc

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

#include "fermenc/fermion_ops.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "fermenc/gadgets.hpp"
#include "fermenc/simulate.hpp"

namespace fermenc {

namespace {

// AND of the controls folded into one borrowed bit (scratch), so diagonal
// payload gates can take arbitrary control lists.
Qubit fold_controls(CircuitBuilder& b, const std::vector<Control>& cs) {
  Qubit a = b.borrow();
  b.begin_scratch();
  b.mcx(cs, a);
  b.end_scratch();
  return a;
}

void unfold_controls(CircuitBuilder& b, const std::vector<Control>& cs,
                     Qubit a) {
  b.begin_scratch();
  b.mcx(cs, a);
  b.end_scratch();
  b.release(a);
}

void check_distinct(const MajoranaProduct& v, int modes) {
  std::set<int> seen;
  for (int mu : v.indices) {
    if (mu < 1 || mu > 2 * modes)
      throw std::out_of_range("Majorana index out of range");
    if (!seen.insert(mu).second)
      throw std::invalid_argument("Majorana indices must be distinct");
  }
}

// Appends the phase query (j Z factors) and the occupation flip for one
// Majorana index; returns the recorded quarter phase.
QuarterPhase append_majorana(CircuitBuilder& b, const Encoding& enc, int mu,
                             const std::vector<Qubit>& map) {
  const int j = (mu + 1) / 2;
  const bool even = mu % 2 == 0;
  const int rank = even ? j : j - 1;
  if (rank > 0) apply_controlled(b, enc.sgn_rank_circuit(rank), {}, map);
  apply_controlled(b, enc.bit_flip_circuit(j), {}, map);
  return even ? QuarterPhase::i() : QuarterPhase::one();
}

std::vector<Qubit> identity_map(int n) {
  std::vector<Qubit> map(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) map[static_cast<size_t>(q)] = static_cast<Qubit>(q);
  return map;
}

}  // namespace

void apply_controlled(CircuitBuilder& b, const Circuit& body,
                      const std::vector<Control>& cs,
                      const std::vector<Qubit>& operand_map) {
  const int dw = body.data_width();
  if (static_cast<int>(operand_map.size()) != dw)
    throw std::invalid_argument("operand map does not cover the data qubits");
  std::vector<Qubit> map = operand_map;
  std::vector<Qubit> pool;
  for (int q = dw; q < static_cast<int>(body.width()); ++q) {
    pool.push_back(b.borrow());
    map.push_back(pool.back());
  }
  auto remap = [&](Qubit q) { return map[static_cast<size_t>(q)]; };

  for (const Gate& g : body.gates()) {
    Gate r = g;
    for (Qubit& t : r.targets) t = remap(t);
    for (Control& c : r.controls) c.qubit = remap(c.qubit);
    if (r.scratch || cs.empty()) {
      if (r.scratch) b.begin_scratch();
      b.append(r);
      if (r.scratch) b.end_scratch();
      continue;
    }
    switch (r.kind) {
      case GateKind::X:
        r.kind = GateKind::Mcx;
        [[fallthrough]];
      case GateKind::Mcx:
      case GateKind::Macro:
        r.controls.insert(r.controls.end(), cs.begin(), cs.end());
        b.append(r);
        break;
      case GateKind::Swap:
        emit_cswap(b, cs, r.targets[0], r.targets[1]);
        break;
      case GateKind::Z: {
        Qubit a = fold_controls(b, cs);
        b.cz(a, r.targets[0]);
        unfold_controls(b, cs, a);
        break;
      }
      case GateKind::Cz: {
        std::vector<Control> all = cs;
        all.push_back({r.targets[0], true});
        Qubit a = fold_controls(b, all);
        b.cz(a, r.targets[1]);
        unfold_controls(b, all, a);
        break;
      }
      case GateKind::S:
        throw std::logic_error("cannot control an S gate payload");
    }
  }
  for (auto it = pool.rbegin(); it != pool.rend(); ++it) b.release(*it);
}

CompiledOperator compile_majorana(const Encoding& enc, int mu) {
  return compile_majorana_product(enc, MajoranaProduct{{mu}});
}

CompiledOperator compile_majorana_product(const Encoding& enc,
                                          const MajoranaProduct& v) {
  check_distinct(v, enc.modes());
  CircuitBuilder b;
  enc.add_data_registers(b);
  auto map = identity_map(enc.data_qubits());
  QuarterPhase phase = QuarterPhase::one();
  // Operator products act right to left.
  for (auto it = v.indices.rbegin(); it != v.indices.rend(); ++it)
    phase = phase * append_majorana(b, enc, *it, map);
  return {b.finalize(), phase};
}

Circuit compile_rotation(const Encoding& enc, const RotationSpec& spec) {
  const auto& idx = spec.generator.indices;
  if (idx.size() % 2 != 0)
    throw std::invalid_argument("rotation generator must have even length");
  const int m = static_cast<int>(idx.size()) / 2;
  if (enc.capacity().slack < m)
    throw std::invalid_argument("capacity band too narrow for this generator");
  CompiledOperator u = compile_majorana_product(enc, spec.generator);

  CircuitBuilder b;
  enc.add_data_registers(b);
  Qubit rot = b.add_register("rot", 1, true)[0];
  auto map = identity_map(enc.data_qubits());
  // i^m normalizes the involution; the product's own i's ride along.
  const int s_count = ((u.phase * QuarterPhase(m)).exponent() % 4 + 4) % 4;
  auto controlled_u = [&]() {
    apply_controlled(b, u.circuit, {{rot, true}}, map);
    for (int t = 0; t < s_count; ++t) b.s(rot);
  };
  g_hadamard(b, rot);
  controlled_u();
  g_hadamard(b, rot);
  g_rz(b, rot, 2.0 * spec.theta);
  g_hadamard(b, rot);
  controlled_u();
  g_hadamard(b, rot);
  return b.finalize();
}

std::vector<RotationBranch> evaluate_rotation(
    const Encoding& enc, const RotationSpec& spec,
    const std::vector<uint8_t>& data) {
  CompiledOperator u = compile_majorana_product(enc, spec.generator);
  const int m = static_cast<int>(spec.generator.indices.size()) / 2;
  DataRun run = run_on_data(u.circuit, data);
  if (!run.ancillas_clean)
    throw std::logic_error("generator circuit left ancillas dirty");
  FockState mapped = enc.decode(run.data);
  if (!enc.can_encode(mapped))
    throw std::invalid_argument("generator leaves the capacity band");
  const std::complex<double> phase =
      (run.phase * u.phase * QuarterPhase(m)).value();
  const std::complex<double> ci(0.0, 1.0);
  std::vector<RotationBranch> out;
  const std::complex<double> stay(std::cos(spec.theta), 0.0);
  const std::complex<double> move = ci * std::sin(spec.theta) * phase;
  if (run.data == data) {
    out.push_back({stay + move, data});
    return out;
  }
  // Angles landing on an exact quarter turn produce one branch; the other
  // amplitude is a rounding remnant of cos or sin and gets dropped.
  constexpr double kEps = 1e-15;
  if (std::abs(stay) > kEps) out.push_back({stay, data});
  if (std::abs(move) > kEps) out.push_back({move, run.data});
  return out;
}

Circuit compile_select(const Encoding& enc, SelectOp op) {
  return op == SelectOp::sgn_rank ? enc.sgn_rank_select()
                                  : enc.bit_flip_select();
}

Capacity capacity_for(int k_locality, int fermions) {
  if (k_locality < 0) throw std::invalid_argument("locality must be >= 0");
  return Capacity{fermions, k_locality};
}

}  // namespace fermenc

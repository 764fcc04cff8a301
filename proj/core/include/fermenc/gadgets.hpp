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

#include <optional>

#include "fermenc/builder.hpp"

namespace fermenc {

// serial: ripple constructions, few ancillas. logdepth: tree constructions,
// O(width) ancillas, O(log width) depth.
enum class DepthMode : int64_t { serial = 0, logdepth = 1 };

enum class Rel : int64_t { lt = 0, le = 1, gt = 2, ge = 3, eq = 4 };

bool rel_eval(Rel r, uint64_t x, uint64_t y);

// ---- raw helpers (append primitive gates inline) ----

// x ^= c.
void emit_xor_const(CircuitBuilder& b, const Wires& x, uint64_t c);
// x ^= c when all cs hold.
void emit_ctrl_xor_const(CircuitBuilder& b, const std::vector<Control>& cs,
                         const Wires& x, uint64_t c);
// dst ^= src bitwise.
void emit_xor_reg(CircuitBuilder& b, const Wires& src, const Wires& dst);
void emit_ctrl_xor_reg(CircuitBuilder& b, const std::vector<Control>& cs,
                       const Wires& src, const Wires& dst);
// Swaps a/y (or registers x/y) when all cs hold. The conjugating CXs are
// tagged scratch, so a control added later reaches only the middle gates.
// logdepth fans the AND of cs out to one copy per bit pair.
void emit_cswap(CircuitBuilder& b, const std::vector<Control>& cs, Qubit a, Qubit y);
void emit_cswap_reg(CircuitBuilder& b, const std::vector<Control>& cs,
                    const Wires& x, const Wires& y,
                    DepthMode mode = DepthMode::serial);
// Copies src onto the zeroed dst wires by a balanced CX tree; uncompute
// replays the tree in reverse.
void emit_fanout(CircuitBuilder& b, Qubit src, const Wires& dst, bool uncompute = false);

// ---- gadget emitters (append one MACRO gate; cs = optional controls) ----

// result ^= (x REL c). Relations that are constant for the given c collapse
// to an X or to nothing.
void g_compare_const(CircuitBuilder& b, const Wires& x, uint64_t c, Rel rel,
                     Qubit result, DepthMode mode,
                     const std::vector<Control>& cs = {});
// result ^= (x REL y). Shorter operand is zero-extended via the pool.
void g_compare_reg(CircuitBuilder& b, const Wires& x, const Wires& y, Rel rel,
                   Qubit result, DepthMode mode,
                   const std::vector<Control>& cs = {});
// x := (x + c) mod 2^w and friends.
void g_add_const(CircuitBuilder& b, const Wires& x, uint64_t c,
                 const std::vector<Control>& cs = {});
void g_sub_const(CircuitBuilder& b, const Wires& x, uint64_t c,
                 const std::vector<Control>& cs = {});
// x := (x + y) mod 2^wx, y preserved; y may be narrower than x.
void g_add_reg(CircuitBuilder& b, const Wires& x, const Wires& y,
               const std::vector<Control>& cs = {});
void g_sub_reg(CircuitBuilder& b, const Wires& x, const Wires& y,
               const std::vector<Control>& cs = {});
void g_incr(CircuitBuilder& b, const Wires& x, const std::vector<Control>& cs = {});
void g_decr(CircuitBuilder& b, const Wires& x, const std::vector<Control>& cs = {});
// |a> <-> |c| on x, all other values fixed.
void g_exchange_consts(CircuitBuilder& b, const Wires& x, uint64_t a, uint64_t c,
                       const std::vector<Control>& cs = {});
// |val(y)> <-> |c> on x; identity when val(y) == c; y preserved.
void g_exchange_reg(CircuitBuilder& b, const Wires& x, const Wires& y, uint64_t c,
                    const std::vector<Control>& cs = {});
// Swaps x,y iff one equals p and the other is greater.
void g_ordered_swap_Up(CircuitBuilder& b, const Wires& x, const Wires& y, uint64_t p,
                       DepthMode mode, const std::vector<Control>& cs = {});
// Swaps x,y iff both are >= p.
void g_cond_swap_Sp(CircuitBuilder& b, const Wires& x, const Wires& y, uint64_t p,
                    DepthMode mode, const std::vector<Control>& cs = {});
// Exchanges y between p and all-ones iff x < p and z > p. Pass x = nullopt
// for a hard-coded always-true left comparison.
void g_cond_exchange_Ep(CircuitBuilder& b, const std::optional<Wires>& x,
                        const Wires& y, const Wires& z, uint64_t p, DepthMode mode,
                        const std::vector<Control>& cs = {});
void g_fanout(CircuitBuilder& b, Qubit src, const Wires& dst,
              const std::vector<Control>& cs = {});

// Opaque rotation-circuit leaves: not simulable as basis-state maps, kept
// as leaf gates through lowering.
void g_hadamard(CircuitBuilder& b, Qubit q);
void g_rz(CircuitBuilder& b, Qubit q, double theta);
// Angle carried by an RZ gate (params store nanoradians).
double rz_angle(const Gate& g);

}  // namespace fermenc

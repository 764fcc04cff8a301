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

#include "fermenc/gadgets.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "fermenc/macro_registry.hpp"

namespace fermenc {

bool rel_eval(Rel r, uint64_t x, uint64_t y) {
  switch (r) {
    case Rel::lt: return x < y;
    case Rel::le: return x <= y;
    case Rel::gt: return x > y;
    case Rel::ge: return x >= y;
    case Rel::eq: return x == y;
  }
  return false;
}

namespace {

uint64_t mask_of(uint32_t w) { return w >= 64 ? ~0ull : (1ull << w) - 1; }

uint64_t read_val(const std::vector<uint8_t>& bits, const std::vector<Qubit>& q,
                  size_t off, uint32_t w) {
  uint64_t v = 0;
  for (uint32_t i = 0; i < w; ++i) v |= uint64_t(bits[q[off + i]]) << i;
  return v;
}

void write_val(std::vector<uint8_t>& bits, const std::vector<Qubit>& q, size_t off,
               uint32_t w, uint64_t v) {
  for (uint32_t i = 0; i < w; ++i) bits[q[off + i]] = (v >> i) & 1;
}

Wires slice(const std::vector<Qubit>& q, size_t off, uint32_t w) {
  return Wires(q.begin() + off, q.begin() + off + w);
}

void append_macro(CircuitBuilder& b, const std::string& name,
                  std::vector<int64_t> params, Wires operands,
                  const std::vector<Control>& cs) {
  b.macro(name, std::move(params), std::move(operands));
  if (!cs.empty()) b.pending_gate(b.pending_count() - 1).controls = cs;
}

// ---- expansion bodies ----

// Ripple adder: x += y (mod 2^w), y preserved, equal widths. Carries ride
// on the addend wires and are undone on the way back.
void cuccaro_add(CircuitBuilder& b, const Wires& x, const Wires& y) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  Qubit c0 = b.borrow();
  Qubit carry = c0;
  for (uint32_t i = 0; i < w; ++i) {
    b.cx(y[i], x[i]);
    b.cx(y[i], carry);
    b.mcx({{carry, true}, {x[i], true}}, y[i]);
    carry = y[i];
  }
  for (uint32_t i = w; i-- > 0;) {
    Qubit c = i == 0 ? c0 : y[i - 1];
    b.mcx({{c, true}, {x[i], true}}, y[i]);
    b.cx(y[i], c);
    b.cx(c, x[i]);
  }
  b.release(c0);
}

// result ^= [x >= y] (negated: result ^= [x < y]) via the carry of the
// two's-complement subtraction x + ~y + 1. Serial mode ripples the carry
// along the operand wires; logdepth builds a generate/propagate tree.
void ge_core(CircuitBuilder& b, const Wires& x, const Wires& y, Qubit result,
             bool negate, DepthMode mode) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  std::vector<Gate> log;
  auto rec = [&](Gate g) {
    b.append(g);
    log.push_back(std::move(g));
  };
  Wires borrowed;
  auto bw = [&]() {
    Qubit q = b.borrow();
    borrowed.push_back(q);
    return q;
  };

  Qubit carry_g = 0, carry_p = 0;
  bool has_p = false;

  b.begin_scratch();
  if (mode == DepthMode::serial) {
    for (Qubit q : y) rec({GateKind::X, {q}, {}});
    Qubit c0 = bw();
    rec({GateKind::X, {c0}, {}});
    Qubit carry = c0;
    for (uint32_t i = 0; i < w; ++i) {
      rec({GateKind::Mcx, {x[i]}, {{y[i], true}}});
      rec({GateKind::Mcx, {carry}, {{y[i], true}}});
      rec({GateKind::Mcx, {y[i]}, {{carry, true}, {x[i], true}}});
      carry = y[i];
    }
    carry_g = carry;
  } else {
    // Leaves: g_i = x_i & ~y_i, p_i = ~(x_i ^ y_i); combine pairs lo/hi as
    // G = G_hi xor (P_hi & G_lo), P = P_hi & P_lo (G and P are disjoint).
    std::vector<std::pair<Qubit, Qubit>> level;
    for (uint32_t i = 0; i < w; ++i) {
      Qubit g = bw();
      rec({GateKind::Mcx, {g}, {{x[i], true}, {y[i], false}}});
      Qubit p = bw();
      rec({GateKind::Mcx, {p}, {{x[i], true}}});
      rec({GateKind::Mcx, {p}, {{y[i], true}}});
      rec({GateKind::X, {p}, {}});
      level.push_back({g, p});
    }
    while (level.size() > 1) {
      std::vector<std::pair<Qubit, Qubit>> next;
      size_t i = 0;
      for (; i + 1 < level.size(); i += 2) {
        auto [glo, plo] = level[i];
        auto [ghi, phi] = level[i + 1];
        Qubit G = bw();
        rec({GateKind::Mcx, {G}, {{ghi, true}}});
        rec({GateKind::Mcx, {G}, {{phi, true}, {glo, true}}});
        Qubit P = bw();
        rec({GateKind::Mcx, {P}, {{phi, true}, {plo, true}}});
        next.push_back({G, P});
      }
      if (i < level.size()) next.push_back(level[i]);
      level = std::move(next);
    }
    carry_g = level[0].first;
    carry_p = level[0].second;
    has_p = true;
  }
  b.end_scratch();

  if (negate) b.x(result);
  b.cx(carry_g, result);
  if (has_p) b.cx(carry_p, result);

  b.begin_scratch();
  for (auto it = log.rbegin(); it != log.rend(); ++it) b.append(*it);
  b.end_scratch();
  b.release_many(borrowed);
}

// Shared expansion for the non-equality constant comparisons. Reduces to a
// >= test against c or c+1 on a materialized constant register.
void expand_cmp_const(CircuitBuilder& b, const std::vector<int64_t>& P,
                      const std::vector<Qubit>& q, Rel rel) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t c = static_cast<uint64_t>(P[1]);
  const auto mode = static_cast<DepthMode>(P[2]);
  const uint64_t mx = mask_of(w);
  Wires x = slice(q, 0, w);
  Qubit result = q[w];

  uint64_t against = c;
  bool negate = false;
  switch (rel) {
    case Rel::ge: break;
    case Rel::lt: negate = true; break;
    case Rel::le:
      if (c >= mx) {
        b.x(result);
        return;
      }
      against = c + 1;
      negate = true;
      break;
    case Rel::gt:
      if (c >= mx) return;
      against = c + 1;
      break;
    case Rel::eq: throw std::logic_error("eq handled separately");
  }

  b.begin_scratch();
  Wires creg = b.borrow_many(w);
  std::vector<Gate> mat;
  for (uint32_t i = 0; i < w; ++i)
    if ((against >> i) & 1) {
      Gate g{GateKind::X, {creg[i]}, {}};
      b.append(g);
      mat.push_back(g);
    }
  b.end_scratch();

  ge_core(b, x, creg, result, negate, mode);

  b.begin_scratch();
  for (auto it = mat.rbegin(); it != mat.rend(); ++it) b.append(*it);
  b.end_scratch();
  b.release_many(creg);
}

void expand_cmp_reg(CircuitBuilder& b, const std::vector<int64_t>& P,
                    const std::vector<Qubit>& q, Rel rel) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const auto mode = static_cast<DepthMode>(P[1]);
  Wires x = slice(q, 0, w);
  Wires y = slice(q, w, w);
  Qubit result = q[2 * w];
  switch (rel) {
    case Rel::ge: ge_core(b, x, y, result, false, mode); break;
    case Rel::lt: ge_core(b, x, y, result, true, mode); break;
    case Rel::le: ge_core(b, y, x, result, false, mode); break;
    case Rel::gt: ge_core(b, y, x, result, true, mode); break;
    case Rel::eq: throw std::logic_error("eq handled separately");
  }
}

void expand_eq_const(CircuitBuilder& b, const std::vector<int64_t>& P,
                     const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t c = static_cast<uint64_t>(P[1]);
  std::vector<Control> lits;
  for (uint32_t i = 0; i < w; ++i) lits.push_back({q[i], ((c >> i) & 1) != 0});
  b.mcx(lits, q[w]);
}

void expand_eq_reg(CircuitBuilder& b, const std::vector<int64_t>& P,
                   const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  b.begin_scratch();
  for (uint32_t i = 0; i < w; ++i) b.cx(q[i], q[w + i]);
  b.end_scratch();
  std::vector<Control> lits;
  for (uint32_t i = 0; i < w; ++i) lits.push_back({q[w + i], false});
  b.mcx(lits, q[2 * w]);
  b.begin_scratch();
  for (uint32_t i = 0; i < w; ++i) b.cx(q[i], q[w + i]);
  b.end_scratch();
}

void expand_add_const(CircuitBuilder& b, const std::vector<int64_t>& P,
                      const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t c = static_cast<uint64_t>(P[1]) & mask_of(w);
  if (c == 0) return;
  Wires x = slice(q, 0, w);
  b.begin_scratch();
  Wires creg = b.borrow_many(w);
  for (uint32_t i = 0; i < w; ++i)
    if ((c >> i) & 1) b.x(creg[i]);
  b.end_scratch();
  cuccaro_add(b, x, creg);
  b.begin_scratch();
  for (uint32_t i = 0; i < w; ++i)
    if ((c >> i) & 1) b.x(creg[i]);
  b.end_scratch();
  b.release_many(creg);
}

void expand_add_reg(CircuitBuilder& b, const std::vector<int64_t>& P,
                    const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  cuccaro_add(b, slice(q, 0, w), slice(q, w, w));
}

void expand_sub_reg(CircuitBuilder& b, const std::vector<int64_t>& P,
                    const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  Wires x = slice(q, 0, w);
  b.begin_scratch();
  for (Qubit t : x) b.x(t);
  b.end_scratch();
  cuccaro_add(b, x, slice(q, w, w));
  b.begin_scratch();
  for (Qubit t : x) b.x(t);
  b.end_scratch();
}

void expand_inc(CircuitBuilder& b, const std::vector<int64_t>& P,
                const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  for (uint32_t i = w; i-- > 1;) {
    std::vector<Control> cs;
    for (uint32_t k = 0; k < i; ++k) cs.push_back({q[k], true});
    b.mcx(cs, q[i]);
  }
  b.x(q[0]);
}

void expand_dec(CircuitBuilder& b, const std::vector<int64_t>& P,
                const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  b.x(q[0]);
  for (uint32_t i = 1; i < w; ++i) {
    std::vector<Control> cs;
    for (uint32_t k = 0; k < i; ++k) cs.push_back({q[k], true});
    b.mcx(cs, q[i]);
  }
}

std::vector<Control> all_open(const Wires& x) {
  std::vector<Control> cs;
  for (Qubit q : x) cs.push_back({q, false});
  return cs;
}

// |a> <-> |c> exchange on x: flag the two-element subspace {a, c} into an
// ancilla via zero tests around conditional d-flips, flip by d = a^c in the
// middle, and undo the detection.
void expand_exchange_consts(CircuitBuilder& b, const std::vector<int64_t>& P,
                            const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t a = static_cast<uint64_t>(P[1]);
  const uint64_t c = static_cast<uint64_t>(P[2]);
  const uint64_t d = a ^ c;
  if (d == 0) return;
  Wires x = slice(q, 0, w);
  Qubit anc = b.borrow();

  b.begin_scratch();
  emit_xor_const(b, x, a);
  b.mcx(all_open(x), anc);
  emit_xor_const(b, x, d);
  b.mcx(all_open(x), anc);
  b.end_scratch();

  Wires flips;
  for (uint32_t i = 0; i < w; ++i)
    if ((d >> i) & 1) flips.push_back(x[i]);
  b.mcx_multi({{anc, true}}, flips);

  b.begin_scratch();
  b.mcx(all_open(x), anc);
  emit_xor_const(b, x, d);
  b.mcx(all_open(x), anc);
  emit_xor_const(b, x, a);
  b.end_scratch();
  b.release(anc);
}

// Same exchange with a = val(y) read from a register and c a constant.
// Identity when val(y) == c.
void expand_exchange_reg(CircuitBuilder& b, const std::vector<int64_t>& P,
                         const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t c = static_cast<uint64_t>(P[1]);
  Wires x = slice(q, 0, w);
  Wires y = slice(q, w, w);
  Qubit anc = b.borrow();

  auto xor_d = [&]() {  // x ^= val(y) ^ c
    emit_xor_reg(b, y, x);
    emit_xor_const(b, x, c);
  };
  b.begin_scratch();
  emit_xor_reg(b, y, x);
  b.mcx(all_open(x), anc);
  xor_d();
  b.mcx(all_open(x), anc);
  b.end_scratch();

  for (uint32_t i = 0; i < w; ++i)
    b.mcx({{anc, true}, {y[i], ((c >> i) & 1) == 0}}, x[i]);

  b.begin_scratch();
  b.mcx(all_open(x), anc);
  xor_d();
  b.mcx(all_open(x), anc);
  emit_xor_reg(b, y, x);
  b.end_scratch();
  b.release(anc);
}

void expand_ordered_swap_Up(CircuitBuilder& b, const std::vector<int64_t>& P,
                            const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t p = static_cast<uint64_t>(P[1]);
  const auto mode = static_cast<DepthMode>(P[2]);
  Wires x = slice(q, 0, w);
  Wires y = slice(q, w, w);
  Qubit q1 = b.borrow();
  Qubit q2 = b.borrow();

  auto flags = [&]() {
    g_compare_const(b, x, p, Rel::eq, q1, mode);
    g_compare_const(b, y, p, Rel::eq, q1, mode);
    g_compare_const(b, x, p, Rel::gt, q2, mode);
    g_compare_const(b, y, p, Rel::gt, q2, mode);
  };
  b.begin_scratch();
  flags();
  b.end_scratch();
  emit_cswap_reg(b, {{q1, true}, {q2, true}}, x, y, mode);
  b.begin_scratch();
  flags();
  b.end_scratch();
  b.release(q2);
  b.release(q1);
}

void expand_cond_swap_Sp(CircuitBuilder& b, const std::vector<int64_t>& P,
                         const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t p = static_cast<uint64_t>(P[1]);
  const auto mode = static_cast<DepthMode>(P[2]);
  Wires x = slice(q, 0, w);
  Wires y = slice(q, w, w);
  Qubit q1 = b.borrow();
  Qubit q2 = b.borrow();

  auto flags = [&]() {
    g_compare_const(b, x, p, Rel::ge, q1, mode);
    g_compare_const(b, y, p, Rel::ge, q2, mode);
  };
  b.begin_scratch();
  flags();
  b.end_scratch();
  emit_cswap_reg(b, {{q1, true}, {q2, true}}, x, y, mode);
  b.begin_scratch();
  flags();
  b.end_scratch();
  b.release(q2);
  b.release(q1);
}

void expand_cond_exchange_Ep(CircuitBuilder& b, const std::vector<int64_t>& P,
                             const std::vector<Qubit>& q) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  const uint64_t p = static_cast<uint64_t>(P[1]);
  const auto mode = static_cast<DepthMode>(P[2]);
  const bool hasleft = P[3] != 0;
  const uint64_t inf = mask_of(w);
  if (p >= inf || (hasleft && p == 0)) return;
  Wires x = hasleft ? slice(q, 0, w) : Wires{};
  Wires y = slice(q, hasleft ? w : 0, w);
  Wires z = slice(q, hasleft ? 2 * w : w, w);

  std::vector<Control> cond;
  Qubit q1 = 0, q2 = 0;
  if (hasleft) {
    q1 = b.borrow();
    cond.push_back({q1, true});
  }
  q2 = b.borrow();
  cond.push_back({q2, true});

  auto flags = [&]() {
    if (hasleft) g_compare_const(b, x, p, Rel::lt, q1, mode);
    g_compare_const(b, z, p, Rel::gt, q2, mode);
  };
  b.begin_scratch();
  flags();
  b.end_scratch();
  append_macro(b, "EXCHANGE_CONSTS", {w, static_cast<int64_t>(p), static_cast<int64_t>(inf)},
               y, cond);
  b.begin_scratch();
  flags();
  b.end_scratch();
  b.release(q2);
  if (hasleft) b.release(q1);
}

void expand_fanout(CircuitBuilder& b, const std::vector<int64_t>&,
                   const std::vector<Qubit>& q) {
  emit_fanout(b, q[0], Wires(q.begin() + 1, q.end()));
}

// ---- registered classical actions ----

void apply_cmp_const(const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                     std::vector<uint8_t>& bits, Rel rel) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  if (rel_eval(rel, read_val(bits, q, 0, w), static_cast<uint64_t>(P[1])))
    bits[q[w]] ^= 1;
}

void apply_cmp_reg(const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                   std::vector<uint8_t>& bits, Rel rel) {
  const uint32_t w = static_cast<uint32_t>(P[0]);
  if (rel_eval(rel, read_val(bits, q, 0, w), read_val(bits, q, w, w)))
    bits[q[2 * w]] ^= 1;
}

}  // namespace

// ---- raw helpers ----

void emit_xor_const(CircuitBuilder& b, const Wires& x, uint64_t c) {
  for (size_t i = 0; i < x.size(); ++i)
    if ((c >> i) & 1) b.x(x[i]);
}

void emit_ctrl_xor_const(CircuitBuilder& b, const std::vector<Control>& cs,
                         const Wires& x, uint64_t c) {
  if (cs.empty()) {
    emit_xor_const(b, x, c);
    return;
  }
  Wires targets;
  for (size_t i = 0; i < x.size(); ++i)
    if ((c >> i) & 1) targets.push_back(x[i]);
  if (!targets.empty()) b.mcx_multi(cs, targets);
}

void emit_xor_reg(CircuitBuilder& b, const Wires& src, const Wires& dst) {
  for (size_t i = 0; i < src.size(); ++i) b.cx(src[i], dst[i]);
}

void emit_ctrl_xor_reg(CircuitBuilder& b, const std::vector<Control>& cs,
                       const Wires& src, const Wires& dst) {
  for (size_t i = 0; i < src.size(); ++i) {
    std::vector<Control> c2 = cs;
    c2.push_back({src[i], true});
    b.mcx(c2, dst[i]);
  }
}

void emit_cswap(CircuitBuilder& b, const std::vector<Control>& cs, Qubit a, Qubit y) {
  if (cs.empty()) {
    b.swap(a, y);
    return;
  }
  b.begin_scratch();
  b.cx(a, y);
  b.end_scratch();
  std::vector<Control> c2 = cs;
  c2.push_back({y, true});
  b.mcx(c2, a);
  b.begin_scratch();
  b.cx(a, y);
  b.end_scratch();
}

void emit_cswap_reg(CircuitBuilder& b, const std::vector<Control>& cs,
                    const Wires& x, const Wires& y, DepthMode mode) {
  const size_t w = x.size();
  if (cs.empty()) {
    for (size_t i = 0; i < w; ++i) b.swap(x[i], y[i]);
    return;
  }
  if (mode == DepthMode::serial || w <= 1) {
    for (size_t i = 0; i < w; ++i) emit_cswap(b, cs, x[i], y[i]);
    return;
  }
  // One control copy per bit pair so the per-bit swaps stay parallel.
  b.begin_scratch();
  Qubit root;
  bool rooted = cs.size() > 1;
  if (rooted) {
    root = b.borrow();
    b.mcx(cs, root);
  } else if (!cs[0].closed) {
    rooted = true;
    root = b.borrow();
    b.cx(cs[0].qubit, root, false);
  } else {
    root = cs[0].qubit;
  }
  Wires copies = b.borrow_many(static_cast<uint32_t>(w - 1));
  emit_fanout(b, root, copies);
  b.end_scratch();

  emit_cswap(b, {{root, true}}, x[0], y[0]);
  for (size_t i = 1; i < w; ++i) emit_cswap(b, {{copies[i - 1], true}}, x[i], y[i]);

  b.begin_scratch();
  emit_fanout(b, root, copies, true);
  if (rooted) {
    if (cs.size() > 1)
      b.mcx(cs, root);
    else
      b.cx(cs[0].qubit, root, false);
  }
  b.end_scratch();
  b.release_many(copies);
  if (rooted) b.release(root);
}

void emit_fanout(CircuitBuilder& b, Qubit src, const Wires& dst, bool uncompute) {
  std::vector<Gate> gates;
  std::vector<Qubit> have{src};
  size_t next = 0;
  while (next < dst.size()) {
    size_t n = have.size();
    for (size_t i = 0; i < n && next < dst.size(); ++i) {
      gates.push_back({GateKind::Mcx, {dst[next]}, {{have[i], true}}});
      have.push_back(dst[next]);
      ++next;
    }
  }
  if (uncompute)
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) b.append(*it);
  else
    for (auto& g : gates) b.append(std::move(g));
}

// ---- gadget emitters ----

void g_compare_const(CircuitBuilder& b, const Wires& x, uint64_t c, Rel rel,
                     Qubit result, DepthMode mode, const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  const uint64_t mx = mask_of(w);
  int truth = -1;  // -1 dynamic, 0 constant false, 1 constant true
  if (c > mx) {
    truth = (rel == Rel::lt || rel == Rel::le) ? 1 : 0;
  } else if (c == 0 && rel == Rel::lt) {
    truth = 0;
  } else if (c == 0 && rel == Rel::ge) {
    truth = 1;
  } else if (c == mx && rel == Rel::gt) {
    truth = 0;
  } else if (c == mx && rel == Rel::le) {
    truth = 1;
  }
  if (truth == 0) return;
  if (truth == 1) {
    b.mcx(cs, result);
    return;
  }
  Wires ops = x;
  ops.push_back(result);
  std::string name;
  std::vector<int64_t> params;
  switch (rel) {
    case Rel::eq: name = "EQ_CONST"; params = {w, static_cast<int64_t>(c)}; break;
    case Rel::lt: name = "LT_CONST"; break;
    case Rel::le: name = "LEQ_CONST"; break;
    case Rel::gt: name = "GT_CONST"; break;
    case Rel::ge: name = "GEQ_CONST"; break;
  }
  if (rel != Rel::eq)
    params = {w, static_cast<int64_t>(c), static_cast<int64_t>(mode)};
  append_macro(b, name, std::move(params), std::move(ops), cs);
}

void g_compare_reg(CircuitBuilder& b, const Wires& x, const Wires& y, Rel rel,
                   Qubit result, DepthMode mode, const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(std::max(x.size(), y.size()));
  Wires xp = x, yp = y, pads;
  while (xp.size() < w) {
    pads.push_back(b.borrow());
    xp.push_back(pads.back());
  }
  while (yp.size() < w) {
    pads.push_back(b.borrow());
    yp.push_back(pads.back());
  }
  Wires ops = xp;
  ops.insert(ops.end(), yp.begin(), yp.end());
  ops.push_back(result);
  std::string name;
  std::vector<int64_t> params = {w, static_cast<int64_t>(mode)};
  switch (rel) {
    case Rel::eq: name = "EQ_REG"; params = {w}; break;
    case Rel::lt: name = "LT_REG"; break;
    case Rel::le: name = "LEQ_REG"; break;
    case Rel::gt: name = "GT_REG"; break;
    case Rel::ge: name = "GEQ_REG"; break;
  }
  append_macro(b, name, std::move(params), std::move(ops), cs);
  b.release_many(pads);
}

void g_add_const(CircuitBuilder& b, const Wires& x, uint64_t c,
                 const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  c &= mask_of(w);
  if (c == 0) return;
  append_macro(b, "ADD_CONST", {w, static_cast<int64_t>(c)}, x, cs);
}

void g_sub_const(CircuitBuilder& b, const Wires& x, uint64_t c,
                 const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  g_add_const(b, x, (mask_of(w) + 1 - (c & mask_of(w))) & mask_of(w), cs);
}

namespace {

void add_like(CircuitBuilder& b, const char* name, const Wires& x, const Wires& y,
              const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  Wires yp(y.begin(), y.begin() + std::min<size_t>(y.size(), w));
  Wires pads;
  while (yp.size() < w) {
    pads.push_back(b.borrow());
    yp.push_back(pads.back());
  }
  Wires ops = x;
  ops.insert(ops.end(), yp.begin(), yp.end());
  append_macro(b, name, {w}, std::move(ops), cs);
  b.release_many(pads);
}

}  // namespace

void g_add_reg(CircuitBuilder& b, const Wires& x, const Wires& y,
               const std::vector<Control>& cs) {
  add_like(b, "ADD_REG", x, y, cs);
}

void g_sub_reg(CircuitBuilder& b, const Wires& x, const Wires& y,
               const std::vector<Control>& cs) {
  add_like(b, "SUB_REG", x, y, cs);
}

void g_incr(CircuitBuilder& b, const Wires& x, const std::vector<Control>& cs) {
  append_macro(b, "INC", {static_cast<int64_t>(x.size())}, x, cs);
}

void g_decr(CircuitBuilder& b, const Wires& x, const std::vector<Control>& cs) {
  append_macro(b, "DEC", {static_cast<int64_t>(x.size())}, x, cs);
}

void g_exchange_consts(CircuitBuilder& b, const Wires& x, uint64_t a, uint64_t c,
                       const std::vector<Control>& cs) {
  if (a == c) return;
  append_macro(b, "EXCHANGE_CONSTS",
               {static_cast<int64_t>(x.size()), static_cast<int64_t>(a),
                static_cast<int64_t>(c)},
               x, cs);
}

void g_exchange_reg(CircuitBuilder& b, const Wires& x, const Wires& y, uint64_t c,
                    const std::vector<Control>& cs) {
  Wires ops = x;
  ops.insert(ops.end(), y.begin(), y.end());
  append_macro(b, "EXCHANGE_REG",
               {static_cast<int64_t>(x.size()), static_cast<int64_t>(c)},
               std::move(ops), cs);
}

void g_ordered_swap_Up(CircuitBuilder& b, const Wires& x, const Wires& y, uint64_t p,
                       DepthMode mode, const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  if (p >= mask_of(w)) return;  // nothing is greater than p
  Wires ops = x;
  ops.insert(ops.end(), y.begin(), y.end());
  append_macro(b, "ORDERED_SWAP_Up",
               {w, static_cast<int64_t>(p), static_cast<int64_t>(mode)},
               std::move(ops), cs);
}

void g_cond_swap_Sp(CircuitBuilder& b, const Wires& x, const Wires& y, uint64_t p,
                    DepthMode mode, const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(x.size());
  Wires ops = x;
  ops.insert(ops.end(), y.begin(), y.end());
  append_macro(b, "COND_SWAP_Sp",
               {w, static_cast<int64_t>(p), static_cast<int64_t>(mode)},
               std::move(ops), cs);
}

void g_cond_exchange_Ep(CircuitBuilder& b, const std::optional<Wires>& x,
                        const Wires& y, const Wires& z, uint64_t p, DepthMode mode,
                        const std::vector<Control>& cs) {
  const uint32_t w = static_cast<uint32_t>(y.size());
  if (p >= mask_of(w) || (x.has_value() && p == 0)) return;
  Wires ops;
  if (x) ops = *x;
  ops.insert(ops.end(), y.begin(), y.end());
  ops.insert(ops.end(), z.begin(), z.end());
  append_macro(b, "COND_EXCHANGE_Ep",
               {w, static_cast<int64_t>(p), static_cast<int64_t>(mode),
                x.has_value() ? 1 : 0},
               std::move(ops), cs);
}

void g_fanout(CircuitBuilder& b, Qubit src, const Wires& dst,
              const std::vector<Control>& cs) {
  if (dst.empty()) return;
  Wires ops{src};
  ops.insert(ops.end(), dst.begin(), dst.end());
  append_macro(b, "FANOUT", {}, std::move(ops), cs);
}

void g_hadamard(CircuitBuilder& b, Qubit q) { b.macro("H", {}, {q}); }

void g_rz(CircuitBuilder& b, Qubit q, double theta) {
  b.macro("RZ", {static_cast<int64_t>(std::llround(theta * 1e9))}, {q});
}

double rz_angle(const Gate& g) { return static_cast<double>(g.params.at(0)) * 1e-9; }

// ---- registry ----

namespace {

std::map<std::string, MacroDef>& registry() {
  static std::map<std::string, MacroDef> r;
  return r;
}

std::pair<std::string, std::vector<int64_t>> self_invert_name(
    const std::string& name, const std::vector<int64_t>& params) {
  return {name, params};
}

void register_cmp(const std::string& name, Rel rel, bool reg_form) {
  MacroDef def;
  def.expand = [rel, reg_form](CircuitBuilder& b, const std::vector<int64_t>& P,
                               const std::vector<Qubit>& q) {
    if (rel == Rel::eq) {
      if (reg_form)
        expand_eq_reg(b, P, q);
      else
        expand_eq_const(b, P, q);
    } else if (reg_form) {
      expand_cmp_reg(b, P, q, rel);
    } else {
      expand_cmp_const(b, P, q, rel);
    }
  };
  def.apply = [rel, reg_form](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                              std::vector<uint8_t>& bits, int&) {
    if (reg_form)
      apply_cmp_reg(P, q, bits, rel);
    else
      apply_cmp_const(P, q, bits, rel);
  };
  def.invert = [name](const std::vector<int64_t>& P) { return self_invert_name(name, P); };
  macro_register(name, std::move(def));
}

void register_all() {
  register_cmp("EQ_CONST", Rel::eq, false);
  register_cmp("LT_CONST", Rel::lt, false);
  register_cmp("LEQ_CONST", Rel::le, false);
  register_cmp("GT_CONST", Rel::gt, false);
  register_cmp("GEQ_CONST", Rel::ge, false);
  register_cmp("EQ_REG", Rel::eq, true);
  register_cmp("LT_REG", Rel::lt, true);
  register_cmp("LEQ_REG", Rel::le, true);
  register_cmp("GT_REG", Rel::gt, true);
  register_cmp("GEQ_REG", Rel::ge, true);

  MacroDef add_const;
  add_const.expand = expand_add_const;
  add_const.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                       std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    write_val(bits, q, 0, w,
              (read_val(bits, q, 0, w) + static_cast<uint64_t>(P[1])) & mask_of(w));
  };
  add_const.invert = [](const std::vector<int64_t>& P) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    const uint64_t c = static_cast<uint64_t>(P[1]) & mask_of(w);
    return std::pair<std::string, std::vector<int64_t>>(
        "ADD_CONST", {P[0], static_cast<int64_t>((mask_of(w) + 1 - c) & mask_of(w))});
  };
  macro_register("ADD_CONST", std::move(add_const));

  MacroDef add_reg;
  add_reg.expand = expand_add_reg;
  add_reg.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                     std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    write_val(bits, q, 0, w,
              (read_val(bits, q, 0, w) + read_val(bits, q, w, w)) & mask_of(w));
  };
  add_reg.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("SUB_REG", P);
  };
  macro_register("ADD_REG", std::move(add_reg));

  MacroDef sub_reg;
  sub_reg.expand = expand_sub_reg;
  sub_reg.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                     std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    write_val(bits, q, 0, w,
              (read_val(bits, q, 0, w) - read_val(bits, q, w, w)) & mask_of(w));
  };
  sub_reg.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("ADD_REG", P);
  };
  macro_register("SUB_REG", std::move(sub_reg));

  MacroDef inc;
  inc.expand = expand_inc;
  inc.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                 std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    write_val(bits, q, 0, w, (read_val(bits, q, 0, w) + 1) & mask_of(w));
  };
  inc.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("DEC", P);
  };
  macro_register("INC", std::move(inc));

  MacroDef dec;
  dec.expand = expand_dec;
  dec.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                 std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    write_val(bits, q, 0, w, (read_val(bits, q, 0, w) - 1) & mask_of(w));
  };
  dec.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("INC", P);
  };
  macro_register("DEC", std::move(dec));

  MacroDef exch;
  exch.expand = expand_exchange_consts;
  exch.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                  std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    const uint64_t a = static_cast<uint64_t>(P[1]);
    const uint64_t c = static_cast<uint64_t>(P[2]);
    const uint64_t v = read_val(bits, q, 0, w);
    if (v == a)
      write_val(bits, q, 0, w, c);
    else if (v == c)
      write_val(bits, q, 0, w, a);
  };
  exch.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("EXCHANGE_CONSTS", P);
  };
  macro_register("EXCHANGE_CONSTS", std::move(exch));

  MacroDef exch_reg;
  exch_reg.expand = expand_exchange_reg;
  exch_reg.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                      std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    const uint64_t a = read_val(bits, q, w, w);
    const uint64_t c = static_cast<uint64_t>(P[1]);
    const uint64_t v = read_val(bits, q, 0, w);
    if (a == c) return;
    if (v == a)
      write_val(bits, q, 0, w, c);
    else if (v == c)
      write_val(bits, q, 0, w, a);
  };
  exch_reg.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("EXCHANGE_REG", P);
  };
  macro_register("EXCHANGE_REG", std::move(exch_reg));

  MacroDef up;
  up.expand = expand_ordered_swap_Up;
  up.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    const uint64_t p = static_cast<uint64_t>(P[1]);
    const uint64_t x = read_val(bits, q, 0, w);
    const uint64_t y = read_val(bits, q, w, w);
    if ((x == p && y > p) || (y == p && x > p)) {
      write_val(bits, q, 0, w, y);
      write_val(bits, q, w, w, x);
    }
  };
  up.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("ORDERED_SWAP_Up", P);
  };
  macro_register("ORDERED_SWAP_Up", std::move(up));

  MacroDef sp;
  sp.expand = expand_cond_swap_Sp;
  sp.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    const uint64_t p = static_cast<uint64_t>(P[1]);
    const uint64_t x = read_val(bits, q, 0, w);
    const uint64_t y = read_val(bits, q, w, w);
    if (x >= p && y >= p) {
      write_val(bits, q, 0, w, y);
      write_val(bits, q, w, w, x);
    }
  };
  sp.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("COND_SWAP_Sp", P);
  };
  macro_register("COND_SWAP_Sp", std::move(sp));

  MacroDef ep;
  ep.expand = expand_cond_exchange_Ep;
  ep.apply = [](const std::vector<int64_t>& P, const std::vector<Qubit>& q,
                std::vector<uint8_t>& bits, int&) {
    const uint32_t w = static_cast<uint32_t>(P[0]);
    const uint64_t p = static_cast<uint64_t>(P[1]);
    const bool hasleft = P[3] != 0;
    const uint64_t inf = mask_of(w);
    if (p >= inf || (hasleft && p == 0)) return;
    size_t off = hasleft ? w : 0;
    const bool left_ok = !hasleft || read_val(bits, q, 0, w) < p;
    const bool right_ok = read_val(bits, q, off + w, w) > p;
    if (left_ok && right_ok) {
      const uint64_t y = read_val(bits, q, off, w);
      if (y == p)
        write_val(bits, q, off, w, inf);
      else if (y == inf)
        write_val(bits, q, off, w, p);
    }
  };
  ep.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("COND_EXCHANGE_Ep", P);
  };
  macro_register("COND_EXCHANGE_Ep", std::move(ep));

  MacroDef fan;
  fan.expand = expand_fanout;
  fan.apply = [](const std::vector<int64_t>&, const std::vector<Qubit>& q,
                 std::vector<uint8_t>& bits, int&) {
    // Mirrors the balanced tree exactly so nonzero targets behave the same.
    std::vector<Qubit> have{q[0]};
    size_t next = 1;
    while (next < q.size()) {
      size_t n = have.size();
      for (size_t i = 0; i < n && next < q.size(); ++i) {
        bits[q[next]] ^= bits[have[i]];
        have.push_back(q[next]);
        ++next;
      }
    }
  };
  fan.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("FANOUT", P);
  };
  macro_register("FANOUT", std::move(fan));

  MacroDef h;
  h.opaque = true;
  h.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("H", P);
  };
  macro_register("H", std::move(h));

  MacroDef rz;
  rz.opaque = true;
  rz.invert = [](const std::vector<int64_t>& P) {
    return std::pair<std::string, std::vector<int64_t>>("RZ", {-P[0]});
  };
  macro_register("RZ", std::move(rz));
}

}  // namespace

const MacroDef& macro_lookup(const std::string& name) {
  register_builtin_macros();
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown macro: " + name);
  return it->second;
}

bool macro_exists(const std::string& name) {
  register_builtin_macros();
  return registry().count(name) > 0;
}

void macro_register(const std::string& name, MacroDef def) {
  registry()[name] = std::move(def);
}

void register_builtin_macros() {
  static std::once_flag flag;
  std::call_once(flag, register_all);
}

}  // namespace fermenc

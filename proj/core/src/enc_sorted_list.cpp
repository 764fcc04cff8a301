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

#include <bit>
#include <optional>
#include <stdexcept>

#include "fermenc/encoding.hpp"
#include "fermenc/gadgets.hpp"
#include "enc_internal.hpp"

namespace fermenc {

namespace {

constexpr DepthMode kMode = DepthMode::logdepth;

int ceil_log2(uint64_t n) {
  if (n <= 1) return 0;
  return 64 - std::countl_zero(n - 1);
}

// A mode position that is either a compile-time constant or lives in a
// register (the indexed variants thread the "idx" register through every
// comparison that would otherwise bake in the constant).
struct Pos {
  std::optional<uint64_t> c;
  Wires reg;
};

void cmp(CircuitBuilder& b, const Wires& x, const Pos& p, Rel rel, Qubit res) {
  if (p.c)
    g_compare_const(b, x, *p.c, rel, res, kMode);
  else
    g_compare_reg(b, x, p.reg, rel, res, kMode);
}

// Exchange val(p) <-> inf on x; pads a narrow index register with borrowed
// zero wires to match the operand width.
void exchange_pos_inf(CircuitBuilder& b, const Wires& x, const Pos& p,
                      uint64_t inf, const std::vector<Control>& cs = {}) {
  if (p.c) {
    g_exchange_consts(b, x, *p.c, inf, cs);
    return;
  }
  std::vector<Qubit> pads;
  Wires preg = p.reg;
  while (preg.size() < x.size()) {
    pads.push_back(b.borrow());
    preg.push_back(pads.back());
  }
  g_exchange_reg(b, x, preg, inf, cs);
  b.release_many(pads);
}

// Compare-and-swap that bubbles the register equal to p toward y when the
// other side is larger; identity when p is absent from both.
void up_gate(CircuitBuilder& b, const Wires& x, const Wires& y, const Pos& p) {
  if (p.c) {
    g_ordered_swap_Up(b, x, y, *p.c, kMode);
    return;
  }
  Qubit q1 = b.borrow();
  Qubit q2 = b.borrow();
  auto flags = [&]() {
    cmp(b, x, p, Rel::eq, q1);
    cmp(b, y, p, Rel::eq, q1);
    cmp(b, x, p, Rel::gt, q2);
    cmp(b, y, p, Rel::gt, q2);
  };
  b.begin_scratch();
  flags();
  b.end_scratch();
  emit_cswap_reg(b, {{q1, true}, {q2, true}}, x, y, kMode);
  b.begin_scratch();
  flags();
  b.end_scratch();
  b.release(q2);
  b.release(q1);
}

// Swap x and y when both are >= p.
void sp_gate(CircuitBuilder& b, const Wires& x, const Wires& y, const Pos& p,
             const std::vector<Control>& cs) {
  if (p.c) {
    g_cond_swap_Sp(b, x, y, *p.c, kMode, cs);
    return;
  }
  Qubit q1 = b.borrow();
  Qubit q2 = b.borrow();
  auto flags = [&]() {
    cmp(b, x, p, Rel::ge, q1);
    cmp(b, y, p, Rel::ge, q2);
  };
  b.begin_scratch();
  flags();
  b.end_scratch();
  std::vector<Control> cond = {{q1, true}, {q2, true}};
  cond.insert(cond.end(), cs.begin(), cs.end());
  emit_cswap_reg(b, cond, x, y, kMode);
  b.begin_scratch();
  flags();
  b.end_scratch();
  b.release(q2);
  b.release(q1);
}

// Exchange p <-> inf on y when val(x) < p < val(z); x absent means the left
// neighbour is below every mode.
void ep_gate(CircuitBuilder& b, const std::optional<Wires>& x, const Wires& y,
             const Wires& z, const Pos& p, uint64_t inf) {
  if (p.c) {
    g_cond_exchange_Ep(b, x, y, z, *p.c, kMode);
    return;
  }
  std::vector<Control> cond;
  Qubit q1 = 0, q2 = 0;
  if (x) {
    q1 = b.borrow();
    cond.push_back({q1, true});
  }
  q2 = b.borrow();
  cond.push_back({q2, true});
  auto flags = [&]() {
    if (x) cmp(b, *x, p, Rel::lt, q1);
    cmp(b, z, p, Rel::gt, q2);
  };
  b.begin_scratch();
  flags();
  b.end_scratch();
  exchange_pos_inf(b, y, p, inf, cond);
  b.begin_scratch();
  flags();
  b.end_scratch();
  b.release(q2);
  if (x) b.release(q1);
}

// XOR of the given flag bits into target via a balanced fold; flags are
// restored. Caller wraps the compare passes in scratch sections.
void xor_fold(CircuitBuilder& b, const std::vector<Qubit>& flags,
              Qubit target) {
  const size_t n = flags.size();
  if (n == 0) return;
  auto fold = [&](bool inverse) {
    std::vector<std::pair<Qubit, Qubit>> steps;
    for (size_t gap = 1; gap < n; gap *= 2)
      for (size_t i = 0; i + gap < n; i += 2 * gap)
        steps.push_back({flags[i + gap], flags[i]});
    if (inverse)
      for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        b.cx(it->first, it->second);
    else
      for (const auto& s : steps) b.cx(s.first, s.second);
  };
  b.begin_scratch();
  fold(false);
  b.end_scratch();
  b.cx(flags[0], target);
  b.begin_scratch();
  fold(true);
  b.end_scratch();
}

// Sorted pointer list: F registers of width ceil(log2(M+1)) holding the
// occupied positions in increasing order, empty slots at the top value.
class SortedList final : public Encoding {
 public:
  SortedList(int modes, int fermions, int slack)
      : modes_(modes),
        fermions_(fermions),
        cap_{fermions, slack},
        w_(static_cast<uint32_t>(std::max(1, ceil_log2(static_cast<uint64_t>(modes) + 1)))) {}

  std::string name() const override { return "sorted"; }
  int modes() const override { return modes_; }
  Capacity capacity() const override { return cap_; }
  int data_qubits() const override { return fermions_ * static_cast<int>(w_); }

  bool can_encode(const FockState& b) const override {
    return b.modes() == modes_ && b.weight() <= fermions_;
  }

  std::vector<uint8_t> encode(const FockState& b) const override {
    if (!can_encode(b)) throw std::invalid_argument("state outside promise");
    std::vector<uint8_t> data(static_cast<size_t>(data_qubits()), 0);
    auto pos = b.occupied_positions();
    for (int i = 0; i < fermions_; ++i) {
      uint64_t v = i < static_cast<int>(pos.size()) ? pos[static_cast<size_t>(i)] : inf();
      for (uint32_t t = 0; t < w_; ++t)
        data[static_cast<size_t>(i) * w_ + t] = static_cast<uint8_t>((v >> t) & 1);
    }
    return data;
  }

  FockState decode(const std::vector<uint8_t>& data) const override {
    FockState b(modes_);
    for (int i = 0; i < fermions_; ++i) {
      uint64_t v = 0;
      for (uint32_t t = 0; t < w_; ++t)
        v |= static_cast<uint64_t>(data[static_cast<size_t>(i) * w_ + t]) << t;
      if (v == inf()) continue;
      if (v >= static_cast<uint64_t>(modes_))
        throw std::invalid_argument("pointer outside mode range");
      b.set_bit(static_cast<int>(v) + 1, 1);
    }
    return b;
  }

  void add_data_registers(CircuitBuilder& b) const override {
    for (int i = 0; i < fermions_; ++i)
      b.add_register("x" + std::to_string(i), w_);
  }

  Circuit sgn_rank_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    emit_sgn_rank(b, Pos{static_cast<uint64_t>(j), {}});
    return b.finalize();
  }

  Circuit bit_flip_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    emit_bit_flip(b, Pos{static_cast<uint64_t>(j - 1), {}});
    return b.finalize();
  }

  Circuit sgn_rank_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = add_index(b);
    // Pointer q counts iff q < j, i.e. q <= idx; shift the register
    // comparison to "le" instead of the fixed "< j".
    emit_sgn_rank_le(b, idx);
    return b.finalize();
  }

  Circuit bit_flip_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = add_index(b);
    emit_bit_flip(b, Pos{std::nullopt, idx});
    return b.finalize();
  }

 private:
  uint64_t inf() const { return (uint64_t{1} << w_) - 1; }

  void check_index(int j) const {
    if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  }

  Wires reg(int i) const {
    return contiguous(static_cast<Qubit>(i) * w_, w_);
  }

  Wires add_index(CircuitBuilder& b) const {
    const uint32_t iw = static_cast<uint32_t>(select_index_width());
    return b.add_register("idx", iw);
  }

  void emit_sgn_rank(CircuitBuilder& b, const Pos& j) const {
    std::vector<Qubit> flags;
    for (int i = 0; i < fermions_; ++i) flags.push_back(b.borrow());
    b.begin_scratch();
    for (int i = 0; i < fermions_; ++i) cmp(b, reg(i), j, Rel::lt, flags[static_cast<size_t>(i)]);
    b.end_scratch();
    for (Qubit f : flags) b.z(f);
    b.begin_scratch();
    for (int i = 0; i < fermions_; ++i) cmp(b, reg(i), j, Rel::lt, flags[static_cast<size_t>(i)]);
    b.end_scratch();
    for (auto it = flags.rbegin(); it != flags.rend(); ++it) b.release(*it);
  }

  void emit_sgn_rank_le(CircuitBuilder& b, const Wires& idx) const {
    std::vector<Qubit> flags;
    for (int i = 0; i < fermions_; ++i) flags.push_back(b.borrow());
    b.begin_scratch();
    for (int i = 0; i < fermions_; ++i)
      g_compare_reg(b, reg(i), idx, Rel::le, flags[static_cast<size_t>(i)], kMode);
    b.end_scratch();
    for (Qubit f : flags) b.z(f);
    b.begin_scratch();
    for (int i = 0; i < fermions_; ++i)
      g_compare_reg(b, reg(i), idx, Rel::le, flags[static_cast<size_t>(i)], kMode);
    b.end_scratch();
    for (auto it = flags.rbegin(); it != flags.rend(); ++it) b.release(*it);
  }

  void emit_bit_flip(CircuitBuilder& b, const Pos& p) const {
    if (fermions_ == 0) return;
    for (int i = 0; i + 1 < fermions_; ++i) up_gate(b, reg(i), reg(i + 1), p);
    exchange_pos_inf(b, reg(fermions_ - 1), p, inf());
    for (int i = fermions_ - 2; i >= 0; --i) up_gate(b, reg(i), reg(i + 1), p);
  }

  int modes_;
  int fermions_;
  Capacity cap_;
  uint32_t w_;
};

// Buffered sorted list: logical registers interleaved with one buffer per
// gap plus a fixed top sentinel, so insert/delete moves every displaced
// element through its neighbouring buffer in two swap layers.
class BufferedList final : public Encoding {
 public:
  BufferedList(int modes, int fermions, int slack)
      : modes_(modes),
        fermions_(fermions),
        cap_{fermions, slack},
        w_(static_cast<uint32_t>(std::max(1, ceil_log2(static_cast<uint64_t>(modes) + 1)))) {}

  std::string name() const override { return "buffered"; }
  int modes() const override { return modes_; }
  Capacity capacity() const override { return cap_; }
  int data_qubits() const override {
    return (2 * fermions_ + 2) * static_cast<int>(w_);
  }

  bool can_encode(const FockState& b) const override {
    return b.modes() == modes_ && b.weight() < fermions_;
  }

  std::vector<uint8_t> encode(const FockState& b) const override {
    if (!can_encode(b)) throw std::invalid_argument("state outside promise");
    std::vector<uint8_t> data(static_cast<size_t>(data_qubits()), 0);
    auto put = [&](int slot, uint64_t v) {
      for (uint32_t t = 0; t < w_; ++t)
        data[static_cast<size_t>(slot) * w_ + t] = static_cast<uint8_t>((v >> t) & 1);
    };
    for (int s = 0; s < 2 * fermions_ + 2; ++s) put(s, inf());
    auto pos = b.occupied_positions();
    for (size_t i = 0; i < pos.size(); ++i)
      put(log_slot(static_cast<int>(i) + 1), pos[i]);
    return data;
  }

  FockState decode(const std::vector<uint8_t>& data) const override {
    FockState b(modes_);
    for (int i = 1; i <= fermions_; ++i) {
      uint64_t v = 0;
      for (uint32_t t = 0; t < w_; ++t)
        v |= static_cast<uint64_t>(data[static_cast<size_t>(log_slot(i)) * w_ + t]) << t;
      if (v == inf()) continue;
      if (v >= static_cast<uint64_t>(modes_))
        throw std::invalid_argument("pointer outside mode range");
      b.set_bit(static_cast<int>(v) + 1, 1);
    }
    return b;
  }

  void add_data_registers(CircuitBuilder& b) const override {
    b.add_register("b0", w_);
    for (int i = 1; i <= fermions_; ++i) {
      b.add_register("l" + std::to_string(i), w_);
      b.add_register("b" + std::to_string(i), w_);
    }
    b.add_register("sent", w_);
  }

  Circuit sgn_rank_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    emit_sgn_rank(b, Pos{static_cast<uint64_t>(j), {}});
    return b.finalize();
  }

  Circuit bit_flip_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    emit_bit_flip(b, Pos{static_cast<uint64_t>(j - 1), {}});
    return b.finalize();
  }

  Circuit sgn_rank_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = add_index(b);
    std::vector<Qubit> flags;
    for (int i = 1; i <= fermions_; ++i) flags.push_back(b.borrow());
    b.begin_scratch();
    for (int i = 1; i <= fermions_; ++i)
      g_compare_reg(b, log_reg(i), idx, Rel::le, flags[static_cast<size_t>(i - 1)], kMode);
    b.end_scratch();
    for (Qubit f : flags) b.z(f);
    b.begin_scratch();
    for (int i = 1; i <= fermions_; ++i)
      g_compare_reg(b, log_reg(i), idx, Rel::le, flags[static_cast<size_t>(i - 1)], kMode);
    b.end_scratch();
    for (auto it = flags.rbegin(); it != flags.rend(); ++it) b.release(*it);
    return b.finalize();
  }

  Circuit bit_flip_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = add_index(b);
    emit_bit_flip(b, Pos{std::nullopt, idx});
    return b.finalize();
  }

 private:
  uint64_t inf() const { return (uint64_t{1} << w_) - 1; }

  void check_index(int j) const {
    if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  }

  // Slot order: b0, l1, b1, l2, ..., lF, bF, sent.
  int buf_slot(int i) const { return i == 0 ? 0 : 2 * i; }
  int log_slot(int i) const { return 2 * i - 1; }
  int sent_slot() const { return 2 * fermions_ + 1; }

  Wires slot_reg(int s) const {
    return contiguous(static_cast<Qubit>(s) * w_, w_);
  }
  Wires buf_reg(int i) const { return slot_reg(buf_slot(i)); }
  Wires log_reg(int i) const { return slot_reg(log_slot(i)); }
  Wires sent_reg() const { return slot_reg(sent_slot()); }

  Wires add_index(CircuitBuilder& b) const {
    const uint32_t iw = static_cast<uint32_t>(select_index_width());
    return b.add_register("idx", iw);
  }

  void emit_sgn_rank(CircuitBuilder& b, const Pos& j) const {
    std::vector<Qubit> flags;
    for (int i = 1; i <= fermions_; ++i) flags.push_back(b.borrow());
    b.begin_scratch();
    for (int i = 1; i <= fermions_; ++i)
      cmp(b, log_reg(i), j, Rel::lt, flags[static_cast<size_t>(i - 1)]);
    b.end_scratch();
    for (Qubit f : flags) b.z(f);
    b.begin_scratch();
    for (int i = 1; i <= fermions_; ++i)
      cmp(b, log_reg(i), j, Rel::lt, flags[static_cast<size_t>(i - 1)]);
    b.end_scratch();
    for (auto it = flags.rbegin(); it != flags.rend(); ++it) b.release(*it);
  }

  // Flag layer: f ^= OR over i of [l_i = p], realized as an XOR fold (at most
  // one logical register can equal p).
  void flag_layer(CircuitBuilder& b, const Pos& p, Qubit f) const {
    std::vector<Qubit> eq;
    for (int i = 1; i <= fermions_; ++i) eq.push_back(b.borrow());
    b.begin_scratch();
    for (int i = 1; i <= fermions_; ++i)
      cmp(b, log_reg(i), p, Rel::eq, eq[static_cast<size_t>(i - 1)]);
    b.end_scratch();
    xor_fold(b, eq, f);
    b.begin_scratch();
    for (int i = 1; i <= fermions_; ++i)
      cmp(b, log_reg(i), p, Rel::eq, eq[static_cast<size_t>(i - 1)]);
    b.end_scratch();
    for (auto it = eq.rbegin(); it != eq.rend(); ++it) b.release(*it);
  }

  // Gap layer: for each triple (left, buffer, right), exchange p <-> inf on
  // the buffer when left < p < right. Even triples then odd triples so
  // supports overlap only between layers.
  void gap_layer(CircuitBuilder& b, const Pos& p) const {
    for (int parity = 0; parity < 2; ++parity) {
      for (int i = parity; i <= fermions_; i += 2) {
        std::optional<Wires> left;
        if (i >= 1) left = log_reg(i);
        Wires right = i < fermions_ ? log_reg(i + 1) : sent_reg();
        ep_gate(b, left, buf_reg(i), right, p, inf());
      }
    }
  }

  // Swap layer A: logical i with the buffer to its right.
  void swap_layer_a(CircuitBuilder& b, const Pos& p,
                    const std::vector<Control>& cs) const {
    for (int i = 1; i <= fermions_; ++i) sp_gate(b, log_reg(i), buf_reg(i), p, cs);
  }

  // Swap layer B: buffer i with the value to its right.
  void swap_layer_b(CircuitBuilder& b, const Pos& p,
                    const std::vector<Control>& cs) const {
    for (int i = 0; i <= fermions_; ++i) {
      Wires right = i < fermions_ ? log_reg(i + 1) : sent_reg();
      sp_gate(b, buf_reg(i), right, p, cs);
    }
  }

  void emit_bit_flip(CircuitBuilder& b, const Pos& p) const {
    if (fermions_ == 0) return;
    Qubit f = b.borrow();
    flag_layer(b, p, f);
    gap_layer(b, p);
    swap_layer_a(b, p, {{f, false}});
    swap_layer_b(b, p, {{f, false}});
    swap_layer_b(b, p, {{f, true}});
    swap_layer_a(b, p, {{f, true}});
    gap_layer(b, p);
    flag_layer(b, p, f);
    b.x(f);
    b.release(f);
  }

  int modes_;
  int fermions_;
  Capacity cap_;
  uint32_t w_;
};

}  // namespace

std::unique_ptr<Encoding> make_sorted(int modes, int fermions, int slack) {
  return std::make_unique<SortedList>(modes, fermions, slack);
}

std::unique_ptr<Encoding> make_buffered(int modes, int fermions, int slack) {
  return std::make_unique<BufferedList>(modes, fermions, slack);
}

}  // namespace fermenc

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

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

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

// A comparison operand that is either a baked-in constant or (part of) the
// index register in the select variants.
struct Part {
  std::optional<uint64_t> c;
  Wires r;
};

void cmp_part(CircuitBuilder& b, const Wires& x, const Part& p, Rel rel,
              Qubit res, const std::vector<Control>& cs = {}) {
  if (p.c)
    g_compare_const(b, x, *p.c, rel, res, kMode, cs);
  else
    g_compare_reg(b, x, p.r, rel, res, kMode, cs);
}

// Positions split into a bucket (high G bits) and a low remainder. The
// layout stores one low remainder per slot, slots sorted by position with
// all-ones fillers at the end, plus a single occupancy string of
// H = 2^G + F - 1 bits: a star (1) per slot in slot order and a bar (0)
// between consecutive buckets. A star's bucket is the number of bars to its
// left and its slot index is its string position minus that count, so the
// queries scan the string once with a small bar counter instead of
// comparing F full-width positions.
class Succinct final : public Encoding {
 public:
  Succinct(int modes, int fermions, int slack)
      : modes_(modes),
        fermions_(fermions),
        cap_{fermions, slack},
        w_(static_cast<uint32_t>(std::max(1, ceil_log2(static_cast<uint64_t>(modes) + 1)))),
        G_(static_cast<uint32_t>(ceil_log2(static_cast<uint64_t>(std::max(fermions, 1))))),
        wl_(w_ - G_),
        H_((1u << G_) + static_cast<uint32_t>(std::max(fermions, 1)) - 1) {
    if (fermions < 1)
      throw std::invalid_argument("bucketed layout needs fermions >= 1");
  }

  std::string name() const override { return "succinct"; }
  int modes() const override { return modes_; }
  Capacity capacity() const override { return cap_; }
  int data_qubits() const override {
    return fermions_ * static_cast<int>(wl_) + static_cast<int>(H_);
  }

  bool can_encode(const FockState& b) const override {
    return b.modes() == modes_ && b.weight() < fermions_;
  }

  std::vector<uint8_t> encode(const FockState& b) const override {
    if (!can_encode(b)) throw std::invalid_argument("state outside promise");
    std::vector<uint8_t> data(static_cast<size_t>(data_qubits()), 0);
    auto pos = b.occupied_positions();
    std::vector<uint64_t> slots(static_cast<size_t>(fermions_), inf());
    for (size_t i = 0; i < pos.size(); ++i) slots[i] = pos[i];
    for (int i = 0; i < fermions_; ++i)
      for (uint32_t tb = 0; tb < wl_; ++tb)
        data[static_cast<size_t>(i) * wl_ + tb] =
            static_cast<uint8_t>((slots[static_cast<size_t>(i)] >> tb) & 1);
    size_t q = static_cast<size_t>(fermions_) * wl_;
    size_t slot = 0;
    for (uint64_t bucket = 0; bucket < (uint64_t{1} << G_); ++bucket) {
      while (slot < slots.size() && (slots[slot] >> wl_) == bucket) {
        data[q++] = 1;
        ++slot;
      }
      if (bucket + 1 < (uint64_t{1} << G_)) data[q++] = 0;
    }
    return data;
  }

  FockState decode(const std::vector<uint8_t>& data) const override {
    FockState b(modes_);
    uint64_t bucket = 0;
    int slot = 0;
    uint64_t prev = 0;
    bool have_prev = false;
    bool filler_seen = false;
    const size_t soff = static_cast<size_t>(fermions_) * wl_;
    for (uint32_t q = 0; q < H_; ++q) {
      if (data[soff + q] == 0) {
        ++bucket;
        continue;
      }
      if (slot >= fermions_)
        throw std::invalid_argument("too many occupancy marks");
      uint64_t low = 0;
      for (uint32_t tb = 0; tb < wl_; ++tb)
        low |= static_cast<uint64_t>(data[static_cast<size_t>(slot) * wl_ + tb]) << tb;
      uint64_t v = (bucket << wl_) | low;
      if (v == inf()) {
        filler_seen = true;
      } else {
        if (filler_seen)
          throw std::invalid_argument("occupied slot after filler");
        if (v >= static_cast<uint64_t>(modes_))
          throw std::invalid_argument("position outside mode range");
        if (have_prev && v <= prev)
          throw std::invalid_argument("positions not ascending");
        b.set_bit(static_cast<int>(v) + 1, 1);
        prev = v;
        have_prev = true;
      }
      ++slot;
    }
    if (slot != fermions_)
      throw std::invalid_argument("wrong occupancy mark count");
    return b;
  }

  void add_data_registers(CircuitBuilder& b) const override {
    if (wl_ > 0)
      for (int i = 0; i < fermions_; ++i)
        b.add_register("l" + std::to_string(i), wl_);
    b.add_register("s", H_);
  }

  Circuit sgn_rank_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    uint64_t p = static_cast<uint64_t>(j - 1);
    emit_sgn_rank(b, Part{p >> wl_, {}}, Part{p & low_mask(), {}}, nullptr);
    return b.finalize();
  }

  Circuit bit_flip_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    uint64_t p = static_cast<uint64_t>(j - 1);
    emit_bit_flip(b, Part{p >> wl_, {}}, Part{p & low_mask(), {}});
    return b.finalize();
  }

  Circuit sgn_rank_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = b.add_register("idx", static_cast<uint32_t>(select_index_width()));
    auto [pm, pl] = split_index(idx);
    if (!pm.c && wl_ > 0) {
      Wires arr = b.borrow_many(H_);
      b.begin_scratch();
      fill_rotated_flags(b, arr, pl, Rel::le, pm);
      b.end_scratch();
      emit_sgn_rank(b, pm, pl, &arr);
      b.begin_scratch();
      unfill_rotated_flags(b, arr, pl, Rel::le, pm);
      b.end_scratch();
      b.release_many(arr);
    } else {
      emit_sgn_rank(b, pm, pl, nullptr);
    }
    return b.finalize();
  }

  Circuit bit_flip_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = b.add_register("idx", static_cast<uint32_t>(select_index_width()));
    auto [pm, pl] = split_index(idx);
    emit_bit_flip(b, pm, pl);
    return b.finalize();
  }

 private:
  uint64_t inf() const { return (uint64_t{1} << w_) - 1; }
  uint64_t low_mask() const { return (uint64_t{1} << wl_) - 1; }
  uint64_t bars() const { return (uint64_t{1} << G_) - 1; }
  uint32_t zcw() const { return std::max(1u, G_); }
  uint32_t tw() const {
    return static_cast<uint32_t>(
        std::max(1, ceil_log2(static_cast<uint64_t>(fermions_) + 1)));
  }
  uint32_t psw() const {
    return std::max(1u, static_cast<uint32_t>(ceil_log2(H_)));
  }

  void check_index(int j) const {
    if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  }

  Wires lreg(int i) const { return contiguous(static_cast<Qubit>(i) * wl_, wl_); }
  Wires sreg() const { return contiguous(static_cast<Qubit>(fermions_) * wl_, H_); }

  std::pair<Part, Part> split_index(const Wires& idx) const {
    Part pm, pl;
    if (wl_ == 0) {
      pl.c = 0;
      pm.r = idx;
    } else if (idx.size() <= wl_) {
      pl.r = idx;
      pm.c = 0;
    } else {
      pl.r = Wires(idx.begin(), idx.begin() + wl_);
      pm.r = Wires(idx.begin() + wl_, idx.end());
    }
    return {pm, pl};
  }

  // Writes [low remainder of slot d REL pl] into arr[d] for every slot, then
  // shifts the flags up by the bucket register so the string scan finds slot
  // (q - bucket)'s flag at position q. Only the first F entries are ever
  // nonzero and F - 1 plus the largest total shift is H - 1, so the
  // conditional shift chains never wrap and entries below the shift window
  // stay zero.
  void fill_rotated_flags(CircuitBuilder& b, const Wires& arr, const Part& pl,
                          Rel rel, const Part& pm) const {
    for (int d = 0; d < fermions_; ++d)
      cmp_part(b, lreg(d), pl, rel, arr[static_cast<size_t>(d)]);
    for (size_t g = 0; g < pm.r.size(); ++g) {
      uint32_t sh = 1u << g;
      if (sh >= H_) break;
      for (uint32_t x = H_ - 1; x >= sh; --x)
        emit_cswap(b, {{pm.r[g], true}}, arr[x - sh], arr[x]);
    }
  }

  void unfill_rotated_flags(CircuitBuilder& b, const Wires& arr, const Part& pl,
                            Rel rel, const Part& pm) const {
    for (size_t g = pm.r.size(); g-- > 0;) {
      uint32_t sh = 1u << g;
      if (sh >= H_) continue;
      for (uint32_t x = sh; x < H_; ++x)
        emit_cswap(b, {{pm.r[g], true}}, arr[x - sh], arr[x]);
    }
    for (int d = fermions_ - 1; d >= 0; --d)
      cmp_part(b, lreg(d), pl, rel, arr[static_cast<size_t>(d)]);
  }

  // Phase query: scan the occupancy string once, keeping a bar counter zc,
  // and flip the phase on every star whose position is at most p. A star at
  // q qualifies when zc < bucket(p), or zc = bucket(p) and its slot's low
  // remainder is at most low(p); the two cases are disjoint so a XOR flag
  // realizes their union. arr, when given, holds the pre-rotated low flags
  // for the select variant; otherwise the slot register is addressed
  // directly, which works because the bucket of p is then a constant.
  void emit_sgn_rank(CircuitBuilder& b, const Part& pm, const Part& pl,
                     const Wires* arr) const {
    Wires s = sreg();
    Wires zc = b.borrow_many(zcw());
    Qubit c = b.borrow();
    for (uint32_t q = 0; q < H_; ++q) {
      int i = pm.c ? static_cast<int>(q) - static_cast<int>(*pm.c) : -1;
      const bool low = arr != nullptr || wl_ == 0 || (i >= 0 && i < fermions_);
      std::optional<Qubit> e;
      auto low_term = [&]() {
        if (arr) {
          b.mcx({{*e, true}, {(*arr)[q], true}}, c);
        } else if (wl_ == 0) {
          b.mcx({{*e, true}}, c);  // empty remainders always compare <=
        } else {
          Qubit lf = b.borrow();
          cmp_part(b, lreg(i), pl, Rel::le, lf);
          b.mcx({{*e, true}, {lf, true}}, c);
          cmp_part(b, lreg(i), pl, Rel::le, lf);
          b.release(lf);
        }
      };
      auto flags = [&](bool uncompute) {
        cmp_part(b, zc, pm, Rel::lt, c);
        if (!low) return;
        if (!uncompute) {
          e = b.borrow();
          cmp_part(b, zc, pm, Rel::eq, *e);
          low_term();
        } else {
          low_term();
          cmp_part(b, zc, pm, Rel::eq, *e);
          b.release(*e);
          e.reset();
        }
      };
      b.begin_scratch();
      flags(false);
      b.end_scratch();
      b.cz(s[q], c);
      b.begin_scratch();
      flags(true);
      g_incr(b, zc, {{s[q], false}});
      b.end_scratch();
    }
    b.begin_scratch();
    g_sub_const(b, zc, bars());  // a full scan passes every bar exactly once
    b.end_scratch();
    b.release(c);
    b.release_many(zc);
  }

  // Counting scan: t += [star at q has position < p] and
  // fd ^= [star at q has position = p], with the bar counter zc maintained
  // alongside. reverse plays the steps in mirror order so the same routine
  // uncomputes the counters against the post-toggle state.
  void emit_count_walk(CircuitBuilder& b, bool reverse, const Part& pm,
                       const Part& pl, const Wires& zc, const Wires& t,
                       Qubit fd, const Wires* arr_lt, const Wires* arr_eq) const {
    Wires s = sreg();
    auto step = [&](uint32_t q) {
      int i = pm.c ? static_cast<int>(q) - static_cast<int>(*pm.c) : -1;
      const bool slot = arr_lt != nullptr || wl_ == 0 || (i >= 0 && i < fermions_);
      Qubit c = b.borrow();
      std::optional<Qubit> e;
      auto lt_term = [&]() {
        if (wl_ == 0) return;  // empty remainders are never strictly less
        if (arr_lt) {
          b.mcx({{*e, true}, {(*arr_lt)[q], true}}, c);
          return;
        }
        Qubit lf = b.borrow();
        cmp_part(b, lreg(i), pl, Rel::lt, lf);
        b.mcx({{*e, true}, {lf, true}}, c);
        cmp_part(b, lreg(i), pl, Rel::lt, lf);
        b.release(lf);
      };
      auto flags = [&](bool uncompute) {
        cmp_part(b, zc, pm, Rel::lt, c);
        if (!slot) return;
        if (!uncompute) {
          e = b.borrow();
          cmp_part(b, zc, pm, Rel::eq, *e);
          lt_term();
        } else {
          lt_term();
          cmp_part(b, zc, pm, Rel::eq, *e);
          b.release(*e);
          e.reset();
        }
      };
      auto mark = [&]() {
        if (!slot) return;
        if (wl_ == 0) {
          b.mcx({{s[q], true}, {*e, true}}, fd);
        } else if (arr_eq) {
          b.mcx({{s[q], true}, {*e, true}, {(*arr_eq)[q], true}}, fd);
        } else {
          Qubit ef = b.borrow();
          cmp_part(b, lreg(i), pl, Rel::eq, ef);
          b.mcx({{s[q], true}, {*e, true}, {ef, true}}, fd);
          cmp_part(b, lreg(i), pl, Rel::eq, ef);
          b.release(ef);
        }
      };
      b.begin_scratch();
      flags(false);
      if (!reverse) {
        g_incr(b, t, {{s[q], true}, {c, true}});
        mark();
      } else {
        mark();
        g_decr(b, t, {{s[q], true}, {c, true}});
      }
      flags(true);
      b.end_scratch();
      b.release(c);
    };
    if (!reverse) {
      for (uint32_t q = 0; q < H_; ++q) {
        step(q);
        b.begin_scratch();
        g_incr(b, zc, {{s[q], false}});
        b.end_scratch();
      }
      b.begin_scratch();
      g_sub_const(b, zc, bars());
      b.end_scratch();
    } else {
      b.begin_scratch();
      g_add_const(b, zc, bars());
      b.end_scratch();
      for (uint32_t q = H_; q-- > 0;) {
        b.begin_scratch();
        g_decr(b, zc, {{s[q], false}});
        b.end_scratch();
        step(q);
      }
    }
  }

  // Occupancy toggle at position p. Count the insert slot t (stars strictly
  // below p) and the delete flag fd (p already present), derive the string
  // insertion point ps = t + bucket(p), rotate the low-remainder list and
  // the occupancy string around those points in the direction picked by fd,
  // then run the counting scan in reverse against the flipped state. t and
  // zc return to zero on their own since the toggle leaves stars below p
  // alone; fd always ends opposite, so a final payload X clears it exactly
  // when the toggle itself ran.
  void emit_bit_flip(CircuitBuilder& b, const Part& pm, const Part& pl) const {
    Wires s = sreg();
    const bool use_arrays = !pm.c && wl_ > 0;
    Wires arr_lt, arr_eq;
    const Wires* plt = nullptr;
    const Wires* peq = nullptr;
    if (use_arrays) {
      arr_lt = b.borrow_many(H_);
      arr_eq = b.borrow_many(H_);
      plt = &arr_lt;
      peq = &arr_eq;
    }
    Wires zc = b.borrow_many(zcw());
    Wires t = b.borrow_many(tw());
    Qubit fd = b.borrow();

    auto arrays = [&](bool fill) {
      if (!use_arrays) return;
      b.begin_scratch();
      if (fill) {
        fill_rotated_flags(b, arr_lt, pl, Rel::lt, pm);
        fill_rotated_flags(b, arr_eq, pl, Rel::eq, pm);
      } else {
        unfill_rotated_flags(b, arr_eq, pl, Rel::eq, pm);
        unfill_rotated_flags(b, arr_lt, pl, Rel::lt, pm);
      }
      b.end_scratch();
    };

    arrays(true);
    emit_count_walk(b, false, pm, pl, zc, t, fd, plt, peq);
    arrays(false);

    Wires ps = b.borrow_many(psw());
    Wires ps_low(ps.begin(), ps.begin() + std::min(ps.size(), t.size()));
    auto ps_compute = [&](bool uncompute) {
      b.begin_scratch();
      if (!uncompute) {
        emit_xor_reg(b, t, ps_low);
        if (pm.c)
          g_add_const(b, ps, *pm.c);
        else
          g_add_reg(b, ps, pm.r);
      } else {
        if (pm.c)
          g_sub_const(b, ps, *pm.c);
        else
          g_sub_reg(b, ps, pm.r);
        emit_xor_reg(b, t, ps_low);
      }
      b.end_scratch();
    };
    ps_compute(false);

    // Low-remainder list: bring the top filler down to slot t (insert) or
    // push slot t's value out to the top (delete).
    auto lsb_chain = [&](bool deleting) {
      if (wl_ == 0) return;
      auto link = [&](int i) {
        Qubit g = b.borrow();
        b.begin_scratch();
        g_compare_const(b, t, static_cast<uint64_t>(i), Rel::le, g, kMode);
        b.end_scratch();
        emit_cswap_reg(b, {{g, true}, {fd, deleting}}, lreg(i), lreg(i + 1), kMode);
        b.begin_scratch();
        g_compare_const(b, t, static_cast<uint64_t>(i), Rel::le, g, kMode);
        b.end_scratch();
        b.release(g);
      };
      if (!deleting) {
        for (int i = fermions_ - 2; i >= 0; --i) link(i);
      } else {
        for (int i = 0; i + 1 < fermions_; ++i) link(i);
      }
    };

    // Slot t itself: swap the filler value and low(p). Self-inverse, so the
    // same layer serves insert and delete and needs no direction control.
    auto exchange_layer = [&]() {
      if (wl_ == 0) return;
      if (pl.c && *pl.c == low_mask()) return;  // filler-valued low: no-op
      for (int i = 0; i < fermions_; ++i) {
        Qubit e = b.borrow();
        b.begin_scratch();
        g_compare_const(b, t, static_cast<uint64_t>(i), Rel::eq, e, kMode);
        b.end_scratch();
        if (pl.c) {
          g_exchange_consts(b, lreg(i), *pl.c, low_mask(), {{e, true}});
        } else {
          Wires pads;
          Wires padded = pl.r;
          while (padded.size() < wl_) {
            pads.push_back(b.borrow());
            padded.push_back(pads.back());
          }
          g_exchange_reg(b, lreg(i), padded, low_mask(), {{e, true}});
          b.release_many(pads);
        }
        b.begin_scratch();
        g_compare_const(b, t, static_cast<uint64_t>(i), Rel::eq, e, kMode);
        b.end_scratch();
        b.release(e);
      }
    };

    // Occupancy string: rotate [ps, H-1] right to land the top star at ps
    // (insert) or left to bubble the star at ps out to the top (delete).
    auto msb_chain = [&](bool deleting) {
      auto link = [&](uint32_t q) {
        Qubit g = b.borrow();
        b.begin_scratch();
        g_compare_const(b, ps, q, Rel::le, g, kMode);
        b.end_scratch();
        emit_cswap(b, {{g, true}, {fd, deleting}}, s[q], s[q + 1]);
        b.begin_scratch();
        g_compare_const(b, ps, q, Rel::le, g, kMode);
        b.end_scratch();
        b.release(g);
      };
      if (!deleting) {
        for (uint32_t q = H_ - 1; q-- > 0;) link(q);
      } else {
        for (uint32_t q = 0; q + 1 < H_; ++q) link(q);
      }
    };

    lsb_chain(false);
    exchange_layer();
    lsb_chain(true);
    msb_chain(false);
    msb_chain(true);

    ps_compute(true);
    b.release_many(ps);

    arrays(true);
    emit_count_walk(b, true, pm, pl, zc, t, fd, plt, peq);
    arrays(false);
    b.x(fd);  // payload: fires iff the toggle ran, clearing the flag

    b.release(fd);
    b.release_many(t);
    b.release_many(zc);
    if (use_arrays) {
      b.release_many(arr_eq);
      b.release_many(arr_lt);
    }
  }

  int modes_;
  int fermions_;
  Capacity cap_;
  uint32_t w_, G_, wl_, H_;
};

}  // namespace

std::unique_ptr<Encoding> make_succinct(int modes, int fermions, int slack) {
  return std::make_unique<Succinct>(modes, fermions, slack);
}

}  // namespace fermenc

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
#include <vector>

#include "fermenc/encoding.hpp"
#include "fermenc/gadgets.hpp"
#include "enc_internal.hpp"

namespace fermenc {

namespace {

constexpr DepthMode kMode = DepthMode::logdepth;

// Intervals at most this wide are scanned directly instead of growing
// another tree level.
constexpr uint32_t kLeafCap = 4;

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

Wires head(const Wires& w, size_t n) {
  return Wires(w.begin(), w.begin() + std::min(n, w.size()));
}

uint64_t ones(size_t width) { return (uint64_t{1} << width) - 1; }

// Same slot-plus-occupancy-string layout as the bucketed encoding, extended
// with a tree of running zero counts over the string. Each tree node owns a
// window of string positions and stores how many bars sit in the lower half
// of that window; the root's window is the whole string. Locating the k-th
// bar then walks down the tree comparing a rank against the stored halves,
// and a toggle updates every count along the way from two boundary bits of
// its window, so both queries finish in depth polylogarithmic in the mode
// count instead of scanning the string.
class SuccinctTree final : public Encoding {
 public:
  SuccinctTree(int modes, int fermions, int slack)
      : modes_(modes),
        fermions_(fermions),
        cap_{fermions, slack},
        w_(static_cast<uint32_t>(std::max(1, ceil_log2(static_cast<uint64_t>(modes) + 1)))),
        G_(static_cast<uint32_t>(ceil_log2(static_cast<uint64_t>(std::max(fermions, 1))))),
        wl_(w_ - G_),
        H_((1u << G_) + static_cast<uint32_t>(std::max(fermions, 1)) - 1) {
    if (fermions < 1)
      throw std::invalid_argument("counting-tree layout needs fermions >= 1");
    build_tree(0, H_);
    Qubit off = static_cast<Qubit>(fermions_) * wl_ + H_;
    for (auto& n : tnodes_) {
      n.off = off;
      off += n.width;
      tree_bits_ += n.width;
    }
  }

  std::string name() const override { return "succinct-tree"; }
  int modes() const override { return modes_; }
  Capacity capacity() const override { return cap_; }
  int data_qubits() const override {
    return fermions_ * static_cast<int>(wl_) + static_cast<int>(H_) +
           static_cast<int>(tree_bits_);
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
    const size_t soff = static_cast<size_t>(fermions_) * wl_;
    for (const auto& n : tnodes_) {
      uint64_t count = 0;
      for (uint32_t x = n.lo; x < n.mid; ++x) count += data[soff + x] == 0;
      for (uint32_t tb = 0; tb < n.width; ++tb)
        data[n.off + tb] = static_cast<uint8_t>((count >> tb) & 1);
    }
    return data;
  }

  FockState decode(const std::vector<uint8_t>& data) const override {
    const size_t soff = static_cast<size_t>(fermions_) * wl_;
    for (const auto& n : tnodes_) {
      uint64_t count = 0;
      for (uint32_t x = n.lo; x < n.mid; ++x) count += data[soff + x] == 0;
      uint64_t stored = 0;
      for (uint32_t tb = 0; tb < n.width; ++tb)
        stored |= static_cast<uint64_t>(data[n.off + tb]) << tb;
      if (stored != count)
        throw std::invalid_argument("zero counts disagree with the string");
    }
    FockState b(modes_);
    uint64_t bucket = 0;
    int slot = 0;
    uint64_t prev = 0;
    bool have_prev = false;
    bool filler_seen = false;
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
    for (const auto& n : tnodes_)
      b.add_register("S" + std::to_string(n.lo) + "_" + std::to_string(n.mid),
                     n.width);
  }

  Circuit sgn_rank_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    uint64_t p = static_cast<uint64_t>(j - 1);
    emit_sgn_rank(b, Part{p >> wl_, {}}, Part{p & low_mask(), {}});
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
    emit_sgn_rank(b, pm, pl);
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
  struct TNode {
    uint32_t lo, hi, mid;
    int left = -1, right = -1;
    Qubit off = 0;
    uint32_t width = 0;
  };

  uint64_t inf() const { return (uint64_t{1} << w_) - 1; }
  uint64_t low_mask() const { return (uint64_t{1} << wl_) - 1; }
  uint64_t bars() const { return (uint64_t{1} << G_) - 1; }
  uint32_t spw() const {
    return static_cast<uint32_t>(
        std::max(1, ceil_log2(static_cast<uint64_t>(fermions_) + 1)));
  }
  // Width of a bar rank local to [lo, hi): bounded by both the window size
  // and the total bar count.
  uint32_t rank_w(uint32_t lo, uint32_t hi) const {
    uint64_t cap = std::min<uint64_t>(hi - lo, bars());
    return static_cast<uint32_t>(std::max(1, ceil_log2(cap + 1)));
  }
  // Width of a cycle offset local to [lo, hi): real offsets plus an all-ones
  // cap meaning "starts beyond this window".
  uint32_t cow(uint32_t lo, uint32_t hi) const {
    return static_cast<uint32_t>(
        std::max(1, ceil_log2(static_cast<uint64_t>(hi - lo) + 1)));
  }
  uint32_t pos_w(uint32_t lo, uint32_t hi) const {
    return static_cast<uint32_t>(std::max(1, ceil_log2(hi - lo)));
  }

  void check_index(int j) const {
    if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  }

  Wires lreg(int i) const { return contiguous(static_cast<Qubit>(i) * wl_, wl_); }
  Wires sreg() const { return contiguous(static_cast<Qubit>(fermions_) * wl_, H_); }
  Wires treg(const TNode& n) const { return contiguous(n.off, n.width); }
  int root_node() const { return tnodes_.empty() ? -1 : 0; }

  int build_tree(uint32_t lo, uint32_t hi) {
    if (hi - lo <= kLeafCap) return -1;
    uint32_t mid = lo + (hi - lo + 1) / 2;
    int idx = static_cast<int>(tnodes_.size());
    tnodes_.push_back(
        {lo, hi, mid, -1, -1, 0,
         static_cast<uint32_t>(std::max(1, ceil_log2(mid - lo + 1)))});
    int l = build_tree(lo, mid);
    int r = build_tree(mid, hi);
    tnodes_[static_cast<size_t>(idx)].left = l;
    tnodes_[static_cast<size_t>(idx)].right = r;
    return idx;
  }

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

  // ---- bar rank walk ----

  // Replays identically, so it serves both the compute and the uncompute
  // direction: every write into i is an XOR conditioned only on unchanged
  // wires. Writes the window-local position of the o-th bar into i when f
  // holds.
  void leaf_scan(CircuitBuilder& b, uint32_t lo, uint32_t hi, const Wires& o,
                 Qubit f, const Wires& i, std::vector<Qubit>& keep) const {
    Wires s = sreg();
    uint32_t n = hi - lo;
    Wires z = b.borrow_many(static_cast<uint32_t>(std::max(1, ceil_log2(n + 1))));
    Qubit g = b.borrow();
    for (uint32_t x = 0; x < n; ++x) {
      g_incr(b, z, {{s[lo + x], false}});
      g_compare_reg(b, z, o, Rel::eq, g, kMode);
      if (x) emit_ctrl_xor_const(b, {{g, true}, {s[lo + x], false}, {f, true}}, i, x);
      g_compare_reg(b, z, o, Rel::eq, g, kMode);
    }
    for (uint32_t x = n; x-- > 0;) g_decr(b, z, {{s[lo + x], false}});
    keep.insert(keep.end(), z.begin(), z.end());
    keep.push_back(g);
  }

  // Routing block shared by the forward and reverse walks: c picks the side
  // holding the o-th bar, the rank forwards unchanged to the left or less
  // the stored count to the right. mirror plays the exact inverse.
  void rank_route(CircuitBuilder& b, const TNode& n, const Wires& o, Qubit f,
                  Qubit c, Qubit fl, Qubit fr, const Wires& ol, const Wires& orr,
                  bool mirror) const {
    Wires S = treg(n);
    if (!mirror) {
      g_compare_reg(b, o, S, Rel::gt, c, kMode);
      b.mcx({{f, true}, {c, false}}, fl);
      b.mcx({{f, true}, {c, true}}, fr);
      emit_ctrl_xor_reg(b, {{fl, true}}, head(o, ol.size()), ol);
      emit_ctrl_xor_reg(b, {{fr, true}}, head(o, orr.size()), orr);
      g_sub_reg(b, orr, head(S, orr.size()), {{fr, true}});
    } else {
      g_add_reg(b, orr, head(S, orr.size()), {{fr, true}});
      emit_ctrl_xor_reg(b, {{fr, true}}, head(o, orr.size()), orr);
      emit_ctrl_xor_reg(b, {{fl, true}}, head(o, ol.size()), ol);
      b.mcx({{f, true}, {c, true}}, fr);
      b.mcx({{f, true}, {c, false}}, fl);
      g_compare_reg(b, o, S, Rel::gt, c, kMode);
    }
  }

  // Walks down to the leaf holding the o-th bar (1-based rank, valid when f
  // holds) and combines the leaf position with the window offsets on the way
  // back up. Only the returned position register carries a value; all other
  // walk wires are retracted here and handed to keep for release.
  Wires rank_fwd(CircuitBuilder& b, uint32_t lo, uint32_t hi, int ni,
                 const Wires& o, Qubit f, std::vector<Qubit>& keep) const {
    if (ni < 0) {
      Wires i = b.borrow_many(pos_w(lo, hi));
      leaf_scan(b, lo, hi, o, f, i, keep);
      return i;
    }
    const TNode& n = tnodes_[static_cast<size_t>(ni)];
    Qubit c = b.borrow();
    Qubit fl = b.borrow();
    Qubit fr = b.borrow();
    Wires ol = b.borrow_many(rank_w(lo, n.mid));
    Wires orr = b.borrow_many(rank_w(n.mid, hi));
    rank_route(b, n, o, f, c, fl, fr, ol, orr, false);
    Wires il = rank_fwd(b, lo, n.mid, n.left, ol, fl, keep);
    Wires ir = rank_fwd(b, n.mid, hi, n.right, orr, fr, keep);
    Wires ip = b.borrow_many(pos_w(lo, hi));
    emit_cswap_reg(b, {{fl, true}}, il, head(ip, il.size()), kMode);
    emit_cswap_reg(b, {{fr, true}}, ir, head(ip, ir.size()), kMode);
    g_add_const(b, ip, n.mid - lo, {{fr, true}});
    rank_route(b, n, o, f, c, fl, fr, ol, orr, true);
    keep.insert(keep.end(), il.begin(), il.end());
    keep.insert(keep.end(), ir.begin(), ir.end());
    keep.insert(keep.end(), ol.begin(), ol.end());
    keep.insert(keep.end(), orr.begin(), orr.end());
    keep.push_back(c);
    keep.push_back(fl);
    keep.push_back(fr);
    return ip;
  }

  // Exact inverse of rank_fwd against the same string: recomputes the
  // routing, pushes the position in ip back down to its leaf and lets the
  // leaf scan retract it.
  void rank_rev(CircuitBuilder& b, uint32_t lo, uint32_t hi, int ni,
                const Wires& o, Qubit f, const Wires& ip,
                std::vector<Qubit>& keep) const {
    if (ni < 0) {
      leaf_scan(b, lo, hi, o, f, ip, keep);
      keep.insert(keep.end(), ip.begin(), ip.end());
      return;
    }
    const TNode& n = tnodes_[static_cast<size_t>(ni)];
    Qubit c = b.borrow();
    Qubit fl = b.borrow();
    Qubit fr = b.borrow();
    Wires ol = b.borrow_many(rank_w(lo, n.mid));
    Wires orr = b.borrow_many(rank_w(n.mid, hi));
    rank_route(b, n, o, f, c, fl, fr, ol, orr, false);
    g_sub_const(b, ip, n.mid - lo, {{fr, true}});
    Wires ir = b.borrow_many(pos_w(n.mid, hi));
    emit_cswap_reg(b, {{fr, true}}, ir, head(ip, ir.size()), kMode);
    Wires il = b.borrow_many(pos_w(lo, n.mid));
    emit_cswap_reg(b, {{fl, true}}, il, head(ip, il.size()), kMode);
    keep.insert(keep.end(), ip.begin(), ip.end());
    rank_rev(b, n.mid, hi, n.right, orr, fr, ir, keep);
    rank_rev(b, lo, n.mid, n.left, ol, fl, il, keep);
    rank_route(b, n, o, f, c, fl, fr, ol, orr, true);
    keep.insert(keep.end(), ol.begin(), ol.end());
    keep.insert(keep.end(), orr.begin(), orr.end());
    keep.push_back(c);
    keep.push_back(fl);
    keep.push_back(fr);
  }

  // ---- window bounds ----

  struct BoundFrame {
    Part val;
    bool walk = false;
    std::optional<Qubit> z;
    Qubit f = 0;
    Wires o, i, reg;
  };

  // p_start = index of the first slot whose bucket reaches bucket(p), found
  // by ranking the bucket(p)-th bar and subtracting the bars before it;
  // p_end the same with the next bar. Ranks falling off either end of the
  // bar range collapse to the constants 0 and F (baked in when the bucket
  // is a constant, patched through an edge flag when it is a register).
  BoundFrame bound_fwd(CircuitBuilder& b, const Part& pm, bool end,
                       std::vector<Qubit>& keep) const {
    BoundFrame bf;
    if (pm.c) {
      uint64_t m = *pm.c + (end ? 1 : 0);
      if (m < 1 || m > bars()) {
        bf.val.c = end ? static_cast<uint64_t>(fermions_) : 0;
        return bf;
      }
      bf.walk = true;
      bf.o = b.borrow_many(rank_w(0, H_));
      emit_xor_const(b, bf.o, m);
      bf.f = b.borrow();
      b.x(bf.f);
      bf.i = rank_fwd(b, 0, H_, root_node(), bf.o, bf.f, keep);
      bf.reg = b.borrow_many(spw());
      emit_xor_reg(b, head(bf.i, bf.reg.size()), bf.reg);
      g_sub_const(b, bf.reg, m - 1);
      bf.val.r = bf.reg;
      return bf;
    }
    bf.walk = true;
    bf.z = b.borrow();
    g_compare_const(b, pm.r, end ? bars() : 0, Rel::eq, *bf.z, kMode);
    bf.f = b.borrow();
    b.x(bf.f);
    b.mcx({{*bf.z, true}}, bf.f);
    bf.o = b.borrow_many(rank_w(0, H_));
    emit_xor_reg(b, head(pm.r, bf.o.size()), bf.o);
    if (end) g_incr(b, bf.o);
    bf.i = rank_fwd(b, 0, H_, root_node(), bf.o, bf.f, keep);
    bf.reg = b.borrow_many(spw());
    emit_xor_reg(b, head(bf.i, bf.reg.size()), bf.reg);
    if (!end) {
      g_incr(b, bf.reg);
      g_sub_reg(b, bf.reg, pm.r);
      g_decr(b, bf.reg, {{*bf.z, true}});
    } else {
      g_sub_reg(b, bf.reg, pm.r);
      g_add_reg(b, bf.reg, pm.r, {{*bf.z, true}});
      g_add_const(b, bf.reg, static_cast<uint64_t>(fermions_), {{*bf.z, true}});
    }
    bf.val.r = bf.reg;
    return bf;
  }

  void bound_rev(CircuitBuilder& b, const Part& pm, bool end,
                 const BoundFrame& bf, std::vector<Qubit>& keep) const {
    if (!bf.walk) return;
    if (pm.c) {
      uint64_t m = *pm.c + (end ? 1 : 0);
      g_add_const(b, bf.reg, m - 1);
      emit_xor_reg(b, head(bf.i, bf.reg.size()), bf.reg);
      keep.insert(keep.end(), bf.reg.begin(), bf.reg.end());
      rank_rev(b, 0, H_, root_node(), bf.o, bf.f, bf.i, keep);
      b.x(bf.f);
      keep.push_back(bf.f);
      emit_xor_const(b, bf.o, m);
      keep.insert(keep.end(), bf.o.begin(), bf.o.end());
      return;
    }
    if (!end) {
      g_incr(b, bf.reg, {{*bf.z, true}});
      g_add_reg(b, bf.reg, pm.r);
      g_decr(b, bf.reg);
    } else {
      g_sub_const(b, bf.reg, static_cast<uint64_t>(fermions_), {{*bf.z, true}});
      g_sub_reg(b, bf.reg, pm.r, {{*bf.z, true}});
      g_add_reg(b, bf.reg, pm.r);
    }
    emit_xor_reg(b, head(bf.i, bf.reg.size()), bf.reg);
    keep.insert(keep.end(), bf.reg.begin(), bf.reg.end());
    rank_rev(b, 0, H_, root_node(), bf.o, bf.f, bf.i, keep);
    if (end) g_decr(b, bf.o);
    emit_xor_reg(b, head(pm.r, bf.o.size()), bf.o);
    keep.insert(keep.end(), bf.o.begin(), bf.o.end());
    b.mcx({{*bf.z, true}}, bf.f);
    b.x(bf.f);
    keep.push_back(bf.f);
    g_compare_const(b, pm.r, end ? bars() : 0, Rel::eq, *bf.z, kMode);
    keep.push_back(*bf.z);
  }

  // ---- fanned comparison copies ----

  // The per-slot comparisons all read the two bounds (and the target's low
  // remainder in the select variants). One copy per group of about
  // log2(modes) slots keeps those comparisons running in parallel batches
  // instead of queueing on a single register.
  struct Fan {
    std::vector<Wires> ps, pe, pl;
    uint32_t groups = 1;
  };

  uint32_t ncopies() const {
    uint32_t per = std::max(1u, w_);
    return std::max(1u, static_cast<uint32_t>(fermions_) / per);
  }

  Fan fan_fwd(CircuitBuilder& b, const Part& ps, const Part& pe,
              const Part& pl) const {
    Fan f;
    f.groups = ncopies();
    auto spread = [&](const Part& p, std::vector<Wires>& out) {
      if (p.c || p.r.empty()) return;
      out.push_back(p.r);
      for (uint32_t c = 1; c < f.groups; ++c)
        out.push_back(b.borrow_many(static_cast<uint32_t>(p.r.size())));
      for (size_t k = 0; k < p.r.size(); ++k) {
        Wires dst;
        for (uint32_t c = 1; c < f.groups; ++c) dst.push_back(out[c][k]);
        if (!dst.empty()) emit_fanout(b, p.r[k], dst);
      }
    };
    spread(ps, f.ps);
    spread(pe, f.pe);
    spread(pl, f.pl);
    return f;
  }

  void fan_rev(CircuitBuilder& b, Fan& f, std::vector<Qubit>& keep) const {
    auto unspread = [&](std::vector<Wires>& out) {
      if (out.empty()) return;
      for (size_t k = out[0].size(); k-- > 0;) {
        Wires dst;
        for (size_t c = 1; c < out.size(); ++c) dst.push_back(out[c][k]);
        if (!dst.empty()) emit_fanout(b, out[0][k], dst, true);
      }
      for (size_t c = 1; c < out.size(); ++c)
        keep.insert(keep.end(), out[c].begin(), out[c].end());
      out.clear();
    };
    unspread(f.ps);
    unspread(f.pe);
    unspread(f.pl);
  }

  static Part pick(const Part& base, const std::vector<Wires>& copies, int r,
                   uint32_t groups) {
    if (copies.empty()) return base;
    return Part{std::nullopt, copies[static_cast<size_t>(r) % groups]};
  }

  // ---- phase query ----

  // Phase = parity of occupied positions at most p. Slots wholly below the
  // window contribute the parity of p_start itself; slots inside the window
  // contribute when their low remainder is at most low(p). Fillers never
  // qualify because a real p is never the all-ones word.
  void emit_sgn_rank(CircuitBuilder& b, const Part& pm, const Part& pl) const {
    std::vector<Qubit> keep;
    b.begin_scratch();
    BoundFrame bs = bound_fwd(b, pm, false, keep);
    BoundFrame be = bound_fwd(b, pm, true, keep);
    Fan fan = fan_fwd(b, bs.val, be.val, pl);
    b.end_scratch();

    if (bs.val.c) {
      if (*bs.val.c & 1) {
        Qubit t = b.borrow();
        b.begin_scratch();
        b.x(t);
        b.end_scratch();
        b.z(t);
        b.begin_scratch();
        b.x(t);
        b.end_scratch();
        b.release(t);
      }
    } else {
      b.z(bs.val.r[0]);
    }

    struct GW {
      Qubit qa, qb, ql, fw;
    };
    std::vector<GW> gw(fan.groups);
    for (auto& g : gw) {
      g.qa = b.borrow();
      g.qb = b.borrow();
      g.ql = b.borrow();
      g.fw = b.borrow();
    }
    for (int r = 0; r < fermions_; ++r) {
      if (bs.val.c && static_cast<uint64_t>(r) < *bs.val.c) continue;
      if (be.val.c && static_cast<uint64_t>(r) >= *be.val.c) continue;
      GW& g = gw[static_cast<size_t>(r) % fan.groups];
      std::vector<Control> cs;
      auto cmps = [&](bool un) {
        Part ps = pick(bs.val, fan.ps, r, fan.groups);
        Part pe = pick(be.val, fan.pe, r, fan.groups);
        Part lo = pick(pl, fan.pl, r, fan.groups);
        auto one = [&](bool cond, const auto& fn) {
          if (cond) fn();
        };
        if (!un) {
          one(!bs.val.c, [&] { g_compare_const(b, ps.r, static_cast<uint64_t>(r), Rel::le, g.qa, kMode); });
          one(!be.val.c, [&] { g_compare_const(b, pe.r, static_cast<uint64_t>(r), Rel::gt, g.qb, kMode); });
          one(wl_ > 0, [&] { cmp_part(b, lreg(r), lo, Rel::le, g.ql); });
        } else {
          one(wl_ > 0, [&] { cmp_part(b, lreg(r), lo, Rel::le, g.ql); });
          one(!be.val.c, [&] { g_compare_const(b, pe.r, static_cast<uint64_t>(r), Rel::gt, g.qb, kMode); });
          one(!bs.val.c, [&] { g_compare_const(b, ps.r, static_cast<uint64_t>(r), Rel::le, g.qa, kMode); });
        }
      };
      if (!bs.val.c) cs.push_back({g.qa, true});
      if (!be.val.c) cs.push_back({g.qb, true});
      if (wl_ > 0) cs.push_back({g.ql, true});
      b.begin_scratch();
      cmps(false);
      b.mcx(cs, g.fw);
      b.end_scratch();
      b.z(g.fw);
      b.begin_scratch();
      b.mcx(cs, g.fw);
      cmps(true);
      b.end_scratch();
    }
    for (auto& g : gw) {
      b.release(g.fw);
      b.release(g.ql);
      b.release(g.qb);
      b.release(g.qa);
    }

    b.begin_scratch();
    fan_rev(b, fan, keep);
    bound_rev(b, pm, true, be, keep);
    bound_rev(b, pm, false, bs, keep);
    b.end_scratch();
    b.release_many(keep);
  }

  // ---- occupancy toggle ----

  // Window flags for the toggle: fz[r] = [slot r's value >= p], one wire per
  // slot so the list rotation swaps run in parallel, and fd = [p present].
  // Every write is an XOR against state the toggle preserves, so running the
  // same routine again afterwards retracts fz and leaves fd = "presence
  // changed" for the caller's final payload X.
  void flags_phase(CircuitBuilder& b, const Part& pm, const Part& pl,
                   const Wires& fz, const Wires& qins, Qubit fd) const {
    std::vector<Qubit> keep;
    b.begin_scratch();
    BoundFrame bs = bound_fwd(b, pm, false, keep);
    BoundFrame be = bound_fwd(b, pm, true, keep);
    Fan fan = fan_fwd(b, bs.val, be.val, pl);

    struct GW {
      Qubit qa, qb, qge, qeq;
    };
    std::vector<GW> gw(fan.groups);
    for (auto& g : gw) {
      g.qa = b.borrow();
      g.qb = b.borrow();
      g.qge = b.borrow();
      g.qeq = b.borrow();
    }

    auto slot_pass = [&](bool with_fz) {
      for (int r = 0; r < fermions_; ++r) {
        const bool below = bs.val.c && static_cast<uint64_t>(r) < *bs.val.c;
        const bool above = be.val.c && static_cast<uint64_t>(r) >= *be.val.c;
        if (with_fz && above) b.x(fz[static_cast<size_t>(r)]);
        if (below || above) continue;
        GW& g = gw[static_cast<size_t>(r) % fan.groups];
        Part ps = pick(bs.val, fan.ps, r, fan.groups);
        Part pe = pick(be.val, fan.pe, r, fan.groups);
        Part lo = pick(pl, fan.pl, r, fan.groups);
        auto cmps = [&](bool un) {
          auto c_a = [&] {
            if (!bs.val.c)
              g_compare_const(b, ps.r, static_cast<uint64_t>(r), Rel::le, g.qa, kMode);
          };
          auto c_b = [&] {
            if (!be.val.c)
              g_compare_const(b, pe.r, static_cast<uint64_t>(r), Rel::gt, g.qb, kMode);
          };
          auto c_ge = [&] {
            if (wl_ > 0 && with_fz) cmp_part(b, lreg(r), lo, Rel::ge, g.qge);
          };
          auto c_eq = [&] {
            if (wl_ > 0) cmp_part(b, lreg(r), lo, Rel::eq, g.qeq);
          };
          if (!un) {
            c_a();
            c_b();
            c_ge();
            c_eq();
          } else {
            c_eq();
            c_ge();
            c_b();
            c_a();
          }
        };
        std::vector<Control> win;
        if (!bs.val.c) win.push_back({g.qa, true});
        if (!be.val.c) win.push_back({g.qb, true});
        cmps(false);
        if (with_fz) {
          if (!be.val.c) b.mcx({{g.qb, false}}, fz[static_cast<size_t>(r)]);
          std::vector<Control> t1 = win;
          if (wl_ > 0) t1.push_back({g.qge, true});
          b.mcx(t1, fz[static_cast<size_t>(r)]);
        }
        std::vector<Control> t2 = win;
        if (wl_ > 0) t2.push_back({g.qeq, true});
        b.mcx(t2, qins[static_cast<size_t>(r)]);
        cmps(true);
      }
    };

    slot_pass(true);
    std::vector<std::pair<Qubit, Qubit>> fold;
    uint32_t F = static_cast<uint32_t>(fermions_);
    for (uint32_t st = 1; st < F; st <<= 1)
      for (uint32_t i = 0; i + st < F; i += 2 * st)
        fold.push_back({qins[i + st], qins[i]});
    for (const auto& p : fold) b.cx(p.first, p.second);
    b.cx(qins[0], fd);
    for (auto it = fold.rbegin(); it != fold.rend(); ++it)
      b.cx(it->first, it->second);
    slot_pass(false);

    for (auto& g : gw) {
      b.release(g.qeq);
      b.release(g.qge);
      b.release(g.qb);
      b.release(g.qa);
    }
    fan_rev(b, fan, keep);
    bound_rev(b, pm, true, be, keep);
    bound_rev(b, pm, false, bs, keep);
    b.end_scratch();
    b.release_many(keep);
  }

  // ---- insert slot count ----

  struct PopNode {
    uint32_t lo, hi;
    int a = -1, c = -1;
    Wires r;
  };

  int pop_build(CircuitBuilder& b, uint32_t lo, uint32_t hi,
                std::vector<PopNode>& pn) const {
    int idx = static_cast<int>(pn.size());
    pn.push_back({lo, hi});
    pn[static_cast<size_t>(idx)].r = b.borrow_many(
        static_cast<uint32_t>(std::max(1, ceil_log2(hi - lo + 1))));
    if (hi - lo > 1) {
      uint32_t m = lo + (hi - lo) / 2;
      int a = pop_build(b, lo, m, pn);
      int c = pop_build(b, m, hi, pn);
      pn[static_cast<size_t>(idx)].a = a;
      pn[static_cast<size_t>(idx)].c = c;
    }
    return idx;
  }

  // Balanced count of the slots left of the toggle window (the unflagged
  // ones), so the depth stays logarithmic in the slot count.
  void pop_apply(CircuitBuilder& b, std::vector<PopNode>& pn, int i,
                 const Wires& fz, bool un) const {
    PopNode& n = pn[static_cast<size_t>(i)];
    if (n.a < 0) {
      b.mcx({{fz[n.lo], false}}, n.r[0]);
      return;
    }
    if (!un) {
      pop_apply(b, pn, n.a, fz, false);
      pop_apply(b, pn, n.c, fz, false);
      emit_xor_reg(b, pn[static_cast<size_t>(n.a)].r, n.r);
      g_add_reg(b, n.r, pn[static_cast<size_t>(n.c)].r);
    } else {
      g_sub_reg(b, n.r, pn[static_cast<size_t>(n.c)].r);
      emit_xor_reg(b, pn[static_cast<size_t>(n.a)].r, n.r);
      pop_apply(b, pn, n.c, fz, true);
      pop_apply(b, pn, n.a, fz, true);
    }
  }

  // ---- occupancy cycle ----

  struct CycNode {
    Qubit cv = 0, iv = 0, cov = 0;
    Wires ol, orr;
    Wires o;
    Qubit f = 0;
  };

  // Per-bit participation flags for a leaf window: a bit takes part when the
  // cycle start lies at or below it. Involution, shared by the down and up
  // passes.
  void cyc_leaf(CircuitBuilder& b, uint32_t lo, uint32_t hi, const Wires& o,
                Qubit f, const Wires& fx, std::vector<Qubit>& keep) const {
    Qubit gc = b.borrow();
    for (uint32_t x = 0; x < hi - lo; ++x) {
      b.mcx({{f, false}}, fx[lo + x]);
      g_compare_const(b, o, x, Rel::le, gc, kMode);
      b.mcx({{f, true}, {gc, true}}, fx[lo + x]);
      g_compare_const(b, o, x, Rel::le, gc, kMode);
    }
    keep.push_back(gc);
  }

  // Walks the cycle start down the tree. f means the start lies at or past
  // the window's base; o is the start relative to the base, with all-ones
  // standing in for "past the window's end". Both derive from the start and
  // window constants alone, never from the stored counts, so the same walk
  // brackets the count updates and the string rotation in either direction.
  void cyc_down(CircuitBuilder& b, uint32_t lo, uint32_t hi, int ni,
                const Wires& o, Qubit f, const Wires& fx,
                std::vector<CycNode>& cf, std::vector<Qubit>& keep) const {
    if (ni < 0) {
      cyc_leaf(b, lo, hi, o, f, fx, keep);
      return;
    }
    const TNode& n = tnodes_[static_cast<size_t>(ni)];
    CycNode& cn = cf[static_cast<size_t>(ni)];
    cn.o = o;
    cn.f = f;
    cn.cv = b.borrow();
    cn.iv = b.borrow();
    cn.cov = b.borrow();
    uint64_t sz = n.mid - lo;
    g_compare_const(b, o, sz, Rel::ge, cn.cv, kMode);
    g_compare_const(b, o, ones(o.size()), Rel::eq, cn.iv, kMode);
    b.mcx({{f, true}, {cn.cv, true}}, cn.cov);
    cn.ol = b.borrow_many(cow(lo, n.mid));
    cn.orr = b.borrow_many(cow(n.mid, hi));
    emit_ctrl_xor_const(b, {{cn.cov, true}}, cn.ol, ones(cn.ol.size()));
    emit_ctrl_xor_reg(b, {{f, true}, {cn.cv, false}}, head(o, cn.ol.size()), cn.ol);
    emit_ctrl_xor_reg(b, {{cn.cov, true}, {cn.iv, false}}, head(o, cn.orr.size()),
                      cn.orr);
    g_sub_const(b, cn.orr, sz, {{cn.cov, true}, {cn.iv, false}});
    emit_ctrl_xor_const(b, {{cn.cov, true}, {cn.iv, true}}, cn.orr,
                        ones(cn.orr.size()));
    cyc_down(b, lo, n.mid, n.left, cn.ol, f, fx, cf, keep);
    cyc_down(b, n.mid, hi, n.right, cn.orr, cn.cov, fx, cf, keep);
  }

  void cyc_up(CircuitBuilder& b, uint32_t lo, uint32_t hi, int ni,
              const Wires& o, Qubit f, const Wires& fx, std::vector<CycNode>& cf,
              std::vector<Qubit>& keep) const {
    if (ni < 0) {
      cyc_leaf(b, lo, hi, o, f, fx, keep);
      return;
    }
    const TNode& n = tnodes_[static_cast<size_t>(ni)];
    CycNode& cn = cf[static_cast<size_t>(ni)];
    cyc_up(b, n.mid, hi, n.right, cn.orr, cn.cov, fx, cf, keep);
    cyc_up(b, lo, n.mid, n.left, cn.ol, f, fx, cf, keep);
    uint64_t sz = n.mid - lo;
    emit_ctrl_xor_const(b, {{cn.cov, true}, {cn.iv, true}}, cn.orr,
                        ones(cn.orr.size()));
    g_add_const(b, cn.orr, sz, {{cn.cov, true}, {cn.iv, false}});
    emit_ctrl_xor_reg(b, {{cn.cov, true}, {cn.iv, false}}, head(o, cn.orr.size()),
                      cn.orr);
    emit_ctrl_xor_reg(b, {{f, true}, {cn.cv, false}}, head(o, cn.ol.size()), cn.ol);
    emit_ctrl_xor_const(b, {{cn.cov, true}}, cn.ol, ones(cn.ol.size()));
    b.mcx({{f, true}, {cn.cv, true}}, cn.cov);
    g_compare_const(b, o, ones(o.size()), Rel::eq, cn.iv, kMode);
    g_compare_const(b, o, sz, Rel::ge, cn.cv, kMode);
    keep.insert(keep.end(), cn.ol.begin(), cn.ol.end());
    keep.insert(keep.end(), cn.orr.begin(), cn.orr.end());
    keep.push_back(cn.cv);
    keep.push_back(cn.iv);
    keep.push_back(cn.cov);
  }

  // Count maintenance around the string rotation. A stored count loses the
  // bar leaving the top of its window; when the whole window shifts it also
  // gains the bar entering from below. The reverse call replays the inverse
  // against the already-rotated string on the delete path.
  void s_updates(CircuitBuilder& b, bool rv, const std::vector<CycNode>& cf,
                 const Wires& fdc) const {
    Wires s = sreg();
    for (size_t ni = 0; ni < tnodes_.size(); ++ni) {
      const TNode& n = tnodes_[ni];
      const CycNode& cn = cf[ni];
      Wires S = treg(n);
      Control dir{fdc[ni % H_], rv};
      std::vector<Control> leave{{cn.cov, false}, {s[n.mid - 1], false}, dir};
      if (!rv) {
        if (n.lo > 0)
          g_incr(b, S, {{cn.f, false}, {s[n.lo - 1], false}, dir});
        g_decr(b, S, leave);
      } else {
        g_incr(b, S, leave);
        if (n.lo > 0)
          g_decr(b, S, {{cn.f, false}, {s[n.lo - 1], false}, dir});
      }
    }
  }

  // One-step cycle of the flagged suffix of the occupancy string, buffered
  // so each swap layer touches disjoint wire pairs. The wrapped-in star is
  // written at the flag boundary; the wrapped-out star, promised present, is
  // absorbed from the top buffer. The delete chain is the exact inverse
  // under the opposite direction controls.
  void string_rotation(CircuitBuilder& b, const Wires& fx,
                       const Wires& fdc) const {
    Wires s = sreg();
    Wires u = b.borrow_many(H_);
    auto chain = [&](bool del) {
      auto cs = [&](uint32_t x) {
        return std::vector<Control>{{fx[x], true}, {fdc[x], del}};
      };
      auto layer_a = [&] {
        for (uint32_t x = 0; x < H_; ++x) emit_cswap(b, cs(x), s[x], u[x]);
      };
      auto layer_b = [&] {
        for (uint32_t x = 0; x + 1 < H_; ++x) emit_cswap(b, cs(x), u[x], s[x + 1]);
      };
      auto write = [&] {
        for (uint32_t x = 0; x < H_; ++x) {
          std::vector<Control> w = cs(x);
          if (x) w.push_back({fx[x - 1], false});
          b.mcx(w, s[x]);
        }
      };
      auto clear = [&] { b.mcx(cs(H_ - 1), u[H_ - 1]); };
      if (!del) {
        layer_a();
        layer_b();
        write();
        clear();
      } else {
        clear();
        write();
        layer_b();
        layer_a();
      }
    };
    chain(false);
    chain(true);
    b.release_many(u);
  }

  // Same one-step cycle over the low-remainder slots, column by column so F
  // single-bit buffers suffice. The inserted value comes from the boundary
  // write; the discarded top value is promised all-ones.
  void lsb_rotation(CircuitBuilder& b, const Wires& fz, const Wires& bnd,
                    const Wires& fdc, const Part& pl) const {
    const uint32_t F = static_cast<uint32_t>(fermions_);
    Wires u = b.borrow_many(F);
    auto chain = [&](bool del) {
      auto cs = [&](uint32_t r) {
        return std::vector<Control>{{fz[r], true}, {fdc[r], del}};
      };
      auto col = [&](uint32_t k) {
        auto layer_a = [&] {
          for (uint32_t r = 0; r < F; ++r) emit_cswap(b, cs(r), lreg(static_cast<int>(r))[k], u[r]);
        };
        auto layer_b = [&] {
          for (uint32_t r = 0; r + 1 < F; ++r)
            emit_cswap(b, cs(r), u[r], lreg(static_cast<int>(r) + 1)[k]);
        };
        auto write = [&] {
          for (uint32_t r = 0; r < F; ++r) {
            if (pl.c) {
              if ((*pl.c >> k) & 1)
                b.mcx({{bnd[r], true}, {fdc[r], del}}, lreg(static_cast<int>(r))[k]);
            } else if (k < pl.r.size()) {
              b.mcx({{bnd[r], true}, {fdc[r], del}, {pl.r[k], true}},
                    lreg(static_cast<int>(r))[k]);
            }
          }
        };
        auto clear = [&] { b.mcx(cs(F - 1), u[F - 1]); };
        if (!del) {
          layer_a();
          layer_b();
          write();
          clear();
        } else {
          clear();
          write();
          layer_b();
          layer_a();
        }
      };
      if (!del) {
        for (uint32_t k = 0; k < wl_; ++k) col(k);
      } else {
        for (uint32_t k = wl_; k-- > 0;) col(k);
      }
    };
    chain(false);
    chain(true);
    b.release_many(u);
  }

  // Occupancy toggle at position p: window flags pick the insert slot, the
  // slot list and the occupancy string rotate one step around it in the
  // direction given by the presence flag, the stored counts update along the
  // cycle walk, and a second flag pass against the toggled state retracts
  // everything, leaving the presence flag to a final payload X.
  void emit_bit_flip(CircuitBuilder& b, const Part& pm, const Part& pl) const {
    const uint32_t F = static_cast<uint32_t>(fermions_);
    std::vector<Qubit> keep;
    Wires fz = b.borrow_many(F);
    Wires qins = b.borrow_many(F);
    Qubit fd = b.borrow();

    flags_phase(b, pm, pl, fz, qins, fd);

    Wires fdc = b.borrow_many(H_);
    b.begin_scratch();
    emit_fanout(b, fd, fdc);
    b.end_scratch();

    std::vector<PopNode> pn;
    std::vector<CycNode> cf(tnodes_.size());
    b.begin_scratch();
    int proot = pop_build(b, 0, F, pn);
    pop_apply(b, pn, proot, fz, false);
    Wires t = pn[static_cast<size_t>(proot)].r;
    Wires ps = b.borrow_many(cow(0, H_));
    emit_xor_reg(b, t, ps);
    if (pm.c)
      g_add_const(b, ps, *pm.c);
    else
      g_add_reg(b, ps, pm.r);
    Qubit f0 = b.borrow();
    b.x(f0);
    Wires fx = b.borrow_many(H_);
    cyc_down(b, 0, H_, root_node(), ps, f0, fx, cf, keep);
    b.end_scratch();

    if (wl_ > 0) {
      Wires bnd = b.borrow_many(F);
      auto edges = [&] {
        b.begin_scratch();
        for (uint32_t r = 0; r < F; ++r) {
          std::vector<Control> cs{{fz[r], true}};
          if (r) cs.push_back({fz[r - 1], false});
          b.mcx(cs, bnd[r]);
        }
        b.end_scratch();
      };
      edges();
      lsb_rotation(b, fz, bnd, fdc, pl);
      edges();
      b.release_many(bnd);
    }

    s_updates(b, false, cf, fdc);
    string_rotation(b, fx, fdc);
    s_updates(b, true, cf, fdc);

    b.begin_scratch();
    cyc_up(b, 0, H_, root_node(), ps, f0, fx, cf, keep);
    keep.insert(keep.end(), fx.begin(), fx.end());
    b.x(f0);
    keep.push_back(f0);
    if (pm.c)
      g_sub_const(b, ps, *pm.c);
    else
      g_sub_reg(b, ps, pm.r);
    emit_xor_reg(b, t, ps);
    keep.insert(keep.end(), ps.begin(), ps.end());
    pop_apply(b, pn, proot, fz, true);
    for (const auto& n : pn) keep.insert(keep.end(), n.r.begin(), n.r.end());
    emit_fanout(b, fd, fdc, true);
    keep.insert(keep.end(), fdc.begin(), fdc.end());
    b.end_scratch();

    flags_phase(b, pm, pl, fz, qins, fd);
    b.x(fd);  // payload: fires iff the toggle ran, clearing the flag

    b.release(fd);
    b.release_many(qins);
    b.release_many(fz);
    b.release_many(keep);
  }

  int modes_;
  int fermions_;
  Capacity cap_;
  uint32_t w_, G_, wl_, H_;
  std::vector<TNode> tnodes_;
  uint32_t tree_bits_ = 0;
};

}  // namespace

std::unique_ptr<Encoding> make_succinct_tree(int modes, int fermions, int slack) {
  return std::make_unique<SuccinctTree>(modes, fermions, slack);
}

}  // namespace fermenc

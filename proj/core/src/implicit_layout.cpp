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

#include "fermenc/implicit.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <vector>

#include "fermenc/builder.hpp"
#include "fermenc/gadgets.hpp"

namespace fermenc {

namespace {

constexpr DepthMode kMode = DepthMode::serial;
constexpr int64_t kPad = -1;

int ceil_log2(uint64_t n) {
  if (n <= 1) return 0;
  return 64 - std::countl_zero(n - 1);
}

uint64_t bin(int n, int r) {
  if (n < 0 || r < 0 || r > n) return 0;
  return binomial_u64(n, r);
}

uint64_t key_of(const FockState& b) {
  uint64_t v = 0;
  for (int j = 1; j <= b.modes(); ++j)
    if (b.bit(j)) v |= uint64_t{1} << (j - 1);
  return v;
}

// ---- level geometry ----
//
// The level-j table lists every admitted string, sorted by the level-j
// order, as a run of "books": one book per (total weight n, suffix weight
// f). A book holds one chapter per weight-(n-f) prefix, ordered by the
// reversed prefix; a chapter lists the C(M-j, f) weight-f suffixes in
// lexicographic order and is padded to the next power of two. Books are
// packed back to back from index 0; everything after them is padding pool.

struct Book {
  int n = 0;           // total weight
  int f = 0;           // suffix weight
  uint64_t base = 0;   // first slot
  uint64_t cnt = 0;    // chapters = C(j, n - f)
  uint64_t content = 0;  // real entries per chapter = C(M - j, f)
  int cap = 0;         // log2 of the padded chapter stride
};

struct Ctx {
  int M = 0;
  Capacity cap;
  int width = 0;
  uint64_t len() const { return uint64_t{1} << width; }
};

struct Level {
  std::vector<Book> books;
  uint64_t data_end = 0;
};

Level build_level(const Ctx& c, int j) {
  Level lv;
  uint64_t base = 0;
  for (int n = c.cap.lo(c.M); n <= c.cap.hi(c.M); ++n) {
    for (int f = std::max(0, n - j); f <= std::min(n, c.M - j); ++f) {
      Book bk;
      bk.n = n;
      bk.f = f;
      bk.cnt = bin(j, n - f);
      bk.content = bin(c.M - j, f);
      bk.cap = ceil_log2(bk.content);
      bk.base = base;
      base += bk.cnt << bk.cap;
      lv.books.push_back(bk);
    }
  }
  lv.data_end = base;
  return lv;
}

const Book* find_book(const Level& lv, int n, int f) {
  for (const Book& bk : lv.books)
    if (bk.n == n && bk.f == f) return &bk;
  return nullptr;
}

uint64_t encode_at(const Ctx& c, const Level& lv, int j, const FockState& b) {
  int n = b.weight();
  int pw = 0;
  for (int i = 1; i <= j; ++i) pw += b.bit(i);
  int f = n - pw;
  const Book* bk = find_book(lv, n, f);
  if (bk == nullptr) throw std::logic_error("missing book for an admitted string");
  // Chapter index: rank of the reversed prefix b_j..b_1 among the
  // weight-pw strings of length j.
  uint64_t ch = 0;
  int rem = pw;
  for (int t = 0; t < j && rem > 0; ++t) {
    if (b.bit(j - t)) {
      ch += bin(j - 1 - t, rem);
      --rem;
    }
  }
  // Offset: rank of the suffix b_{j+1}..b_M among weight-f strings.
  uint64_t sr = 0;
  rem = f;
  for (int t = 0; t < c.M - j && rem > 0; ++t) {
    if (b.bit(j + 1 + t)) {
      sr += bin(c.M - j - 1 - t, rem);
      --rem;
    }
  }
  return bk->base + (ch << bk->cap) + sr;
}

std::optional<FockState> decode_at(const Ctx& c, const Level& lv, int j,
                                   uint64_t label) {
  if (label >= c.len()) throw std::out_of_range("label past the table");
  for (const Book& bk : lv.books) {
    uint64_t span = bk.cnt << bk.cap;
    if (label >= bk.base + span) continue;
    uint64_t rel = label - bk.base;
    uint64_t ch = rel >> bk.cap;
    uint64_t off = rel & ((uint64_t{1} << bk.cap) - 1);
    if (off >= bk.content) return std::nullopt;
    FockState out(c.M);
    int rem = bk.n - bk.f;
    uint64_t r = ch;
    for (int t = 0; t < j; ++t) {
      uint64_t cnt0 = bin(j - 1 - t, rem);
      if (rem > 0 && r >= cnt0) {
        out.set_bit(j - t, 1);
        r -= cnt0;
        --rem;
      }
    }
    rem = bk.f;
    r = off;
    for (int t = 0; t < c.M - j; ++t) {
      uint64_t cnt0 = bin(c.M - j - 1 - t, rem);
      if (rem > 0 && r >= cnt0) {
        out.set_bit(j + 1 + t, 1);
        r -= cnt0;
        --rem;
      }
    }
    return out;
  }
  return std::nullopt;  // trailing pool
}

// Slot contents of the whole level-j table: string keys, kPad elsewhere.
std::vector<int64_t> level_table(const Ctx& c, int j) {
  std::vector<int64_t> tab(c.len(), kPad);
  Level lv = build_level(c, j);
  for (const FockState& b : enumerate_capacity_states(c.M, c.cap))
    tab[encode_at(c, lv, j, b)] = static_cast<int64_t>(key_of(b));
  return tab;
}

// ---- table permutations as classical ops ----
//
// Everything the circuits do to the label register is one of two index
// permutations: a window rotation, or the blockwise interleave of two
// equal-stride lists. Plans are built classically against a model of the
// table and validated slot by slot before any gates are emitted.

struct TapeOp {
  enum class K { rot, ilv } kind = K::rot;
  uint64_t i = 0, k = 0, n = 0;  // rot: [i, i+n) advances by k
  uint64_t base = 0;             // ilv: window start
  int gamma = 0;                 // ilv: 2^gamma blocks per list
  int cap = 0;                   // ilv: log2 block length
  bool inv = false;
};

TapeOp make_rot(uint64_t i, uint64_t k, uint64_t n) {
  TapeOp op;
  op.kind = TapeOp::K::rot;
  op.i = i;
  op.k = k;
  op.n = n;
  return op;
}

TapeOp make_ilv(uint64_t base, int gamma, int cap, bool inv) {
  TapeOp op;
  op.kind = TapeOp::K::ilv;
  op.base = base;
  op.gamma = gamma;
  op.cap = cap;
  op.inv = inv;
  return op;
}

TapeOp invert_op(const TapeOp& op) {
  TapeOp r = op;
  if (op.kind == TapeOp::K::rot) {
    r.k = (op.n - op.k) % op.n;
  } else {
    r.inv = !op.inv;
  }
  return r;
}

void apply_op(std::vector<int64_t>& a, const TapeOp& op) {
  if (op.kind == TapeOp::K::rot) {
    auto first = a.begin() + static_cast<int64_t>(op.i);
    auto last = first + static_cast<int64_t>(op.n);
    std::rotate(first, last - static_cast<int64_t>(op.k), last);
    return;
  }
  uint64_t blocks = uint64_t{1} << (op.gamma + 1);
  uint64_t mask = blocks - 1;
  uint64_t blen = uint64_t{1} << op.cap;
  std::vector<int64_t> tmp(blocks * blen);
  for (uint64_t t = 0; t < blocks; ++t) {
    uint64_t o = op.inv ? ((t >> 1) | ((t & 1) << op.gamma))
                        : (((t << 1) & mask) | (t >> op.gamma));
    for (uint64_t q = 0; q < blen; ++q)
      tmp[o * blen + q] = a[op.base + t * blen + q];
  }
  std::copy(tmp.begin(), tmp.end(), a.begin() + static_cast<int64_t>(op.base));
}

struct Plan {
  std::vector<int64_t> model;
  std::vector<TapeOp> ops;
  uint64_t N = 0;

  void push(const TapeOp& op) {
    apply_op(model, op);
    ops.push_back(op);
  }
  // Pulls `len` padding slots from the table tail in at `pos`.
  void take_pool(uint64_t pos, uint64_t len) {
    if (len == 0) return;
    if (pos + len > N)
      throw std::invalid_argument("table too small to stage the regrouping");
    for (uint64_t t = N - len; t < N; ++t)
      if (model[t] != kPad)
        throw std::invalid_argument("table too small to stage the regrouping");
    if (pos + len == N) return;  // the tail already sits there
    if (pad_suffix(pos)) return;
    push(make_rot(pos, len, N - pos));
  }
  // Sends `len` padding slots at `pos` back to the table tail.
  void give_pool(uint64_t pos, uint64_t len) {
    if (len == 0) return;
    for (uint64_t t = pos; t < pos + len; ++t)
      if (model[t] != kPad)
        throw std::logic_error("regrouping tried to discard a live slot");
    if (pos + len == N) return;
    if (pad_suffix(pos)) return;
    push(make_rot(pos, N - pos - len, N - pos));
  }

  bool pad_suffix(uint64_t pos) const {
    for (uint64_t t = pos; t < N; ++t)
      if (model[t] != kPad) return false;
    return true;
  }
};

// Splits cnt pairs at `cursor` into two block lists. Each pair occupies
// 2^cj slots and holds lenA slots of A-content followed by lenB slots of
// B-content, head-aligned; afterwards the A blocks sit back to back with
// stride 2^ceil_log2(lenA), then the B blocks likewise. Runs entirely on
// pool padding pulled in and returned around the grow/split ladder.
void plan_split_pairs(Plan& p, uint64_t cursor, uint64_t cnt, uint64_t lenA,
                      uint64_t lenB, int cj) {
  int a = ceil_log2(lenA);
  int bb = ceil_log2(lenB);
  int kk = std::max(a, bb);
  if (lenA + lenB > (uint64_t{1} << cj) || cj > kk + 1)
    throw std::logic_error("pair stride inconsistent with its contents");
  int gamma = ceil_log2(cnt);
  uint64_t cntp = uint64_t{1} << gamma;
  uint64_t half = uint64_t{1} << kk;

  p.take_pool(cursor + (cnt << cj), (cntp - cnt) << cj);
  for (int cap = cj; cap <= kk; ++cap) {
    p.take_pool(cursor + (cntp << cap), cntp << cap);
    if (gamma > 0) p.push(make_ilv(cursor, gamma, cap, false));
  }
  if (half != lenA) {
    for (uint64_t q = 0; q < cnt; ++q) {
      uint64_t pb = cursor + (q << (kk + 1));
      p.push(make_rot(pb + lenA, half - lenA, (half << 1) - lenA));
    }
  }
  if (gamma > 0) p.push(make_ilv(cursor, gamma, kk, true));
  for (int cap = kk; cap > a; --cap) {
    if (gamma > 0) p.push(make_ilv(cursor, gamma, cap - 1, true));
    p.give_pool(cursor + (cntp << (cap - 1)), cntp << (cap - 1));
  }
  uint64_t bbase = cursor + (cntp << a);
  for (int cap = kk; cap > bb; --cap) {
    if (gamma > 0) p.push(make_ilv(bbase, gamma, cap - 1, true));
    p.give_pool(bbase + (cntp << (cap - 1)), cntp << (cap - 1));
  }
  p.give_pool(cursor + (cnt << a), (cntp - cnt) << a);
  p.give_pool(cursor + (cnt << a) + (cnt << bb), (cntp - cnt) << bb);
}

// Relabeling plan from the level-j to the level-(j+1) table. Two passes:
// first every chapter swaps its mode-(j+1)-clear and mode-(j+1)-set suffix
// groups in place, then each book's chapters are split pairwise so both
// groups re-pack into the chapters of the next level. The result is checked
// against the independently computed level-(j+1) table.
std::vector<TapeOp> plan_layer_step(const Ctx& c, int j) {
  Plan p;
  p.model = level_table(c, j);
  p.N = c.len();
  Level lj = build_level(c, j);

  for (const Book& bk : lj.books) {
    uint64_t s0 = bin(c.M - j - 1, bk.f);
    uint64_t s1 = bin(c.M - j - 1, bk.f - 1);
    if (s0 == 0 || s1 == 0) continue;
    for (uint64_t ch = 0; ch < bk.cnt; ++ch)
      p.push(make_rot(bk.base + (ch << bk.cap), s1, s0 + s1));
  }

  uint64_t cursor = 0;
  for (const Book& bk : lj.books) {
    uint64_t s0 = bin(c.M - j - 1, bk.f);
    uint64_t s1 = bin(c.M - j - 1, bk.f - 1);
    if (s0 == 0 || s1 == 0) {
      cursor += bk.cnt << bk.cap;
      continue;
    }
    plan_split_pairs(p, cursor, bk.cnt, s1, s0, bk.cap);
    cursor += (bk.cnt << ceil_log2(s1)) + (bk.cnt << ceil_log2(s0));
  }

  if (p.model != level_table(c, j + 1))
    throw std::logic_error("level relabeling does not reproduce the next table");
  return p.ops;
}

// ---- circuit realizations ----

// f ^= [lo <= value < hi). The flag write is left controllable; the
// comparator internals retract on their own.
void range_flag(CircuitBuilder& b, const Wires& l, uint64_t lo, uint64_t hi,
                Qubit f) {
  uint64_t N = uint64_t{1} << l.size();
  if (lo >= hi) throw std::logic_error("empty range test");
  if (lo == 0 && hi >= N) {
    b.x(f);
    return;
  }
  if (lo == 0) {
    g_compare_const(b, l, hi, Rel::lt, f, kMode);
    return;
  }
  if (hi >= N) {
    g_compare_const(b, l, lo, Rel::ge, f, kMode);
    return;
  }
  Qubit qa = b.borrow();
  Qubit qb = b.borrow();
  b.begin_scratch();
  g_compare_const(b, l, lo, Rel::ge, qa, kMode);
  g_compare_const(b, l, hi, Rel::lt, qb, kMode);
  b.end_scratch();
  b.mcx({{qa, true}, {qb, true}}, f);
  b.begin_scratch();
  g_compare_const(b, l, hi, Rel::lt, qb, kMode);
  g_compare_const(b, l, lo, Rel::ge, qa, kMode);
  b.end_scratch();
  b.release(qb);
  b.release(qa);
}

// Window rotation: values in [i, i+n) advance by k mod n. The two movers'
// groups are flagged before the shift and unflagged against the shifted
// ranges they land in.
void emit_rot(CircuitBuilder& b, const Wires& l, uint64_t i, uint64_t k,
              uint64_t n) {
  if (n <= 1 || k == 0) return;
  uint64_t N = uint64_t{1} << l.size();
  if (i == 0 && n == N) {
    g_add_const(b, l, k);
    return;
  }
  if (std::has_single_bit(n) && i % n == 0) {
    int ln = std::countr_zero(n);
    Wires low(l.begin(), l.begin() + ln);
    Wires high(l.begin() + ln, l.end());
    Qubit f = b.borrow();
    g_compare_const(b, high, i >> ln, Rel::eq, f, kMode);
    g_add_const(b, low, k, {{f, true}});
    g_compare_const(b, high, i >> ln, Rel::eq, f, kMode);
    b.release(f);
    return;
  }
  Qubit f1 = b.borrow();
  Qubit f2 = b.borrow();
  range_flag(b, l, i, i + n - k, f1);
  range_flag(b, l, i + n - k, i + n, f2);
  g_add_const(b, l, k, {{f1, true}});
  g_sub_const(b, l, n - k, {{f2, true}});
  range_flag(b, l, i + k, i + n, f1);
  range_flag(b, l, i, i + k, f2);
  b.release(f2);
  b.release(f1);
}

// Blockwise interleave of two adjacent 2^gamma-block lists: inside the
// window the block-index bits rotate one place, realized as a ladder of
// flagged swaps after the window is shifted down to zero.
void emit_ilv(CircuitBuilder& b, const Wires& l, uint64_t base, int gamma,
              int cap, bool inv) {
  if (gamma == 0) return;  // one pair: positions already coincide
  int span_log = gamma + 1 + cap;
  uint64_t span = uint64_t{1} << span_log;
  auto ladder = [&](const std::vector<Control>& cs) {
    if (!inv) {
      for (int t = gamma - 1; t >= 0; --t)
        emit_cswap(b, cs, l[static_cast<size_t>(cap + t)],
                   l[static_cast<size_t>(cap + t + 1)]);
    } else {
      for (int t = 0; t < gamma; ++t)
        emit_cswap(b, cs, l[static_cast<size_t>(cap + t)],
                   l[static_cast<size_t>(cap + t + 1)]);
    }
  };
  if (base % span == 0) {
    if (span_log == static_cast<int>(l.size())) {
      ladder({});
      return;
    }
    Wires high(l.begin() + span_log, l.end());
    Qubit f = b.borrow();
    g_compare_const(b, high, base >> span_log, Rel::eq, f, kMode);
    ladder({{f, true}});
    g_compare_const(b, high, base >> span_log, Rel::eq, f, kMode);
    b.release(f);
    return;
  }
  Qubit f = b.borrow();
  range_flag(b, l, base, base + span, f);
  g_sub_const(b, l, base, {{f, true}});
  ladder({{f, true}});
  g_add_const(b, l, base, {{f, true}});
  range_flag(b, l, base, base + span, f);
  b.release(f);
}

// Exchanges [x, x+L) with [y, y+L), order preserved. Pre: x + L <= y.
void emit_range_swap(CircuitBuilder& b, const Wires& l, uint64_t x, uint64_t y,
                     uint64_t L) {
  if (L == 0) return;
  uint64_t d = y - x;
  Qubit f1 = b.borrow();
  Qubit f2 = b.borrow();
  range_flag(b, l, x, x + L, f1);
  range_flag(b, l, y, y + L, f2);
  g_add_const(b, l, d, {{f1, true}});
  g_sub_const(b, l, d, {{f2, true}});
  range_flag(b, l, y, y + L, f1);
  range_flag(b, l, x, x + L, f2);
  b.release(f2);
  b.release(f1);
}

void emit_op(CircuitBuilder& b, const Wires& l, const TapeOp& op) {
  if (op.kind == TapeOp::K::rot) {
    emit_rot(b, l, op.i, op.k, op.n);
  } else {
    emit_ilv(b, l, op.base, op.gamma, op.cap, op.inv);
  }
}

void emit_plan(CircuitBuilder& b, const Wires& l,
               const std::vector<TapeOp>& ops, bool inverse) {
  if (!inverse) {
    for (const TapeOp& op : ops) emit_op(b, l, op);
  } else {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      emit_op(b, l, invert_op(*it));
  }
}

// Occupancy toggle of mode j on level-j labels. For each (weight, suffix
// weight) the chapters whose prefix ends in 0 sit at the front of their
// book and the matching prefix-ends-in-1 chapters at the back of the next
// book up; one range exchange per pair moves every affected string. Strings
// whose toggle leaves the weight band fall in no range and stay put.
void emit_toggle(CircuitBuilder& b, const Wires& l, const Ctx& c, int j) {
  Level lv = build_level(c, j);
  for (int n = c.cap.lo(c.M); n < c.cap.hi(c.M); ++n) {
    for (int f = std::max(0, n - j + 1); f <= std::min(n, c.M - j); ++f) {
      uint64_t moved = bin(j - 1, n - f);
      if (moved == 0) continue;
      const Book* A = find_book(lv, n, f);
      const Book* B = find_book(lv, n + 1, f);
      if (A == nullptr || B == nullptr)
        throw std::logic_error("toggle pairing lost a book");
      uint64_t L = moved << A->cap;
      uint64_t x = A->base;
      uint64_t y = B->base + ((B->cnt - moved) << B->cap);
      emit_range_swap(b, l, x, y, L);
    }
  }
}

// Phase -1 on level-j labels whose mode j is occupied: within every book
// those are the trailing chapters, one contiguous range per book.
void emit_phase(CircuitBuilder& b, const Wires& l, const Ctx& c, int j) {
  Level lv = build_level(c, j);
  for (const Book& bk : lv.books) {
    uint64_t zeros = bin(j - 1, bk.n - bk.f);
    if (zeros >= bk.cnt) continue;
    uint64_t zs = bk.base + (zeros << bk.cap);
    uint64_t ze = bk.base + (bk.cnt << bk.cap);
    Qubit f = b.borrow();
    range_flag(b, l, zs, ze, f);
    b.z(f);
    range_flag(b, l, zs, ze, f);
    b.release(f);
  }
}

Ctx make_ctx(int modes, int fermions, int slack, int width) {
  Ctx c;
  c.M = modes;
  c.cap = Capacity{fermions, slack};
  c.width = width;
  return c;
}

void check_width(int width) {
  if (width < 1 || width > 60)
    throw std::invalid_argument("table width must lie in [1, 60]");
}

}  // namespace

// ---- ordering ----

bool implicit_order_less(int j, const FockState& x, const FockState& y) {
  if (x.modes() != y.modes())
    throw std::invalid_argument("comparing strings of different lengths");
  int M = x.modes();
  if (j < 0 || j > M) throw std::out_of_range("level out of range");
  if (x.weight() != y.weight()) return x.weight() < y.weight();
  int fx = 0, fy = 0;
  for (int i = j + 1; i <= M; ++i) {
    fx += x.bit(i);
    fy += y.bit(i);
  }
  if (fx != fy) return fx < fy;
  for (int i = j; i >= 1; --i)
    if (x.bit(i) != y.bit(i)) return x.bit(i) < y.bit(i);
  for (int i = j + 1; i <= M; ++i)
    if (x.bit(i) != y.bit(i)) return x.bit(i) < y.bit(i);
  return false;
}

// ---- layout ----

ImplicitLayout::ImplicitLayout(int modes, int fermions, int slack)
    : modes_(modes), fermions_(fermions), slack_(slack) {
  if (modes < 1) throw std::invalid_argument("modes must be positive");
  if (fermions < 0 || fermions > modes)
    throw std::invalid_argument("fermions must lie in [0, modes]");
  if (slack < 0) throw std::invalid_argument("slack must be non-negative");
  if (modes > 62)
    throw std::invalid_argument("label tables support at most 62 modes");
  states_ = capacity_state_count(modes, Capacity{fermions, slack});
  width_ = ceil_log2(states_) + 2;
  check_width(width_);
}

uint64_t ImplicitLayout::label_encode(const FockState& b, int j) const {
  if (b.modes() != modes_)
    throw std::invalid_argument("string has the wrong number of modes");
  if (j < 0 || j > modes_) throw std::out_of_range("level out of range");
  Capacity cap{fermions_, slack_};
  if (!cap.admits(b))
    throw std::invalid_argument("occupation weight outside the promised band");
  Ctx c = make_ctx(modes_, fermions_, slack_, width_);
  Level lv = build_level(c, j);
  return encode_at(c, lv, j, b);
}

std::optional<FockState> ImplicitLayout::label_decode(uint64_t label,
                                                      int j) const {
  if (j < 0 || j > modes_) throw std::out_of_range("level out of range");
  Ctx c = make_ctx(modes_, fermions_, slack_, width_);
  Level lv = build_level(c, j);
  return decode_at(c, lv, j, label);
}

Circuit ImplicitLayout::layer_step(int j, bool inverse) const {
  if (j < 0 || j >= modes_) throw std::out_of_range("level out of range");
  Ctx c = make_ctx(modes_, fermions_, slack_, width_);
  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width_));
  emit_plan(b, l, plan_layer_step(c, j), inverse);
  return b.finalize();
}

Circuit ImplicitLayout::logical_x(int j) const {
  if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  Ctx c = make_ctx(modes_, fermions_, slack_, width_);
  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width_));
  emit_toggle(b, l, c, j);
  return b.finalize();
}

Circuit ImplicitLayout::logical_z(int j) const {
  if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  Ctx c = make_ctx(modes_, fermions_, slack_, width_);
  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width_));
  emit_phase(b, l, c, j);
  return b.finalize();
}

Circuit ImplicitLayout::bit_flip(int j) const {
  if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  Ctx c = make_ctx(modes_, fermions_, slack_, width_);
  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width_));
  std::vector<std::vector<TapeOp>> plans;
  for (int i = 0; i < j; ++i) plans.push_back(plan_layer_step(c, i));
  for (int i = 0; i < j; ++i) emit_plan(b, l, plans[static_cast<size_t>(i)], false);
  emit_toggle(b, l, c, j);
  for (int i = j - 1; i >= 0; --i)
    emit_plan(b, l, plans[static_cast<size_t>(i)], true);
  return b.finalize();
}

Circuit ImplicitLayout::sgn_rank(int j) const {
  if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  Ctx c = make_ctx(modes_, fermions_, slack_, width_);
  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width_));
  std::vector<std::vector<TapeOp>> plans;
  for (int i = 0; i < j; ++i) plans.push_back(plan_layer_step(c, i));
  for (int i = 1; i <= j; ++i) {
    emit_plan(b, l, plans[static_cast<size_t>(i - 1)], false);
    emit_phase(b, l, c, i);
  }
  for (int i = j - 1; i >= 0; --i)
    emit_plan(b, l, plans[static_cast<size_t>(i)], true);
  return b.finalize();
}

// ---- standalone table permutations ----

Circuit build_rotate(uint64_t i, uint64_t k, uint64_t n, int width) {
  check_width(width);
  uint64_t N = uint64_t{1} << width;
  if (n < 1 || k >= n) throw std::invalid_argument("need 0 <= k < n");
  if (i + n > N) throw std::invalid_argument("window past the table");
  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width));
  emit_rot(b, l, i, k, n);
  return b.finalize();
}

Circuit build_block_swap(uint64_t posA, uint64_t lenA, uint64_t posB,
                         uint64_t lenB, int width) {
  check_width(width);
  uint64_t N = uint64_t{1} << width;
  if (posB < posA) {
    std::swap(posA, posB);
    std::swap(lenA, lenB);
  }
  if (posA + lenA > posB || posB + lenB > N)
    throw std::invalid_argument("blocks must be disjoint and inside the table");
  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width));
  if (posA + lenA == posB) {
    if (lenA + lenB > 0 && lenB < lenA + lenB)
      emit_rot(b, l, posA, lenB, lenA + lenB);
  } else if (lenA == lenB) {
    emit_range_swap(b, l, posA, posB, lenA);
  } else {
    throw std::invalid_argument(
        "unequal blocks can only be exchanged when adjacent");
  }
  return b.finalize();
}

Circuit build_simple_interleave(uint64_t n_blocks, uint64_t block_len,
                                int width, bool inverse) {
  check_width(width);
  if (n_blocks < 1 || block_len < 1 || !std::has_single_bit(block_len))
    throw std::invalid_argument("need n_blocks >= 1 and power-of-two blocks");
  int gamma = ceil_log2(n_blocks);
  int cap = std::countr_zero(block_len);
  uint64_t cntp = uint64_t{1} << gamma;
  uint64_t N = uint64_t{1} << width;
  if (2 * cntp * block_len > N)
    throw std::invalid_argument("table too small for the extended lists");

  Plan p;
  p.N = N;
  p.model.assign(N, kPad);
  for (uint64_t t = 0; t < 2 * n_blocks * block_len; ++t)
    p.model[t] = static_cast<int64_t>(t);
  if (n_blocks == cntp) {
    p.push(make_ilv(0, gamma, cap, false));
  } else {
    uint64_t ext = (cntp - n_blocks) * block_len;
    p.take_pool(n_blocks * block_len, ext);
    p.take_pool(cntp * block_len + n_blocks * block_len, ext);
    p.push(make_ilv(0, gamma, cap, false));
    p.give_pool(2 * n_blocks * block_len, 2 * ext);
  }
  for (uint64_t q = 0; q < n_blocks; ++q) {
    for (uint64_t t = 0; t < block_len; ++t) {
      bool ok = p.model[2 * q * block_len + t] ==
                    static_cast<int64_t>(q * block_len + t) &&
                p.model[(2 * q + 1) * block_len + t] ==
                    static_cast<int64_t>((n_blocks + q) * block_len + t);
      if (!ok) throw std::logic_error("interleave did not pair the lists");
    }
  }

  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width));
  emit_plan(b, l, p.ops, inverse);
  return b.finalize();
}

Circuit build_interleave_padded(uint64_t n_blocks, uint64_t lenA,
                                uint64_t lenB, int width, bool inverse) {
  check_width(width);
  if (n_blocks < 1 || lenA < 1 || lenB < 1 || !std::has_single_bit(lenA) ||
      !std::has_single_bit(lenB))
    throw std::invalid_argument("need n_blocks >= 1 and power-of-two blocks");
  int kk = std::max(std::countr_zero(lenA), std::countr_zero(lenB));
  uint64_t pair = uint64_t{1} << (kk + 1);
  uint64_t N = uint64_t{1} << width;
  if (n_blocks * pair > N)
    throw std::invalid_argument("table too small for the padded pairs");

  // Plan on the paired form and play it backwards for the forward op.
  Plan p;
  p.N = N;
  p.model.assign(N, kPad);
  for (uint64_t q = 0; q < n_blocks; ++q) {
    for (uint64_t t = 0; t < lenA; ++t)
      p.model[q * pair + t] = static_cast<int64_t>(q * (lenA + lenB) + t);
    for (uint64_t t = 0; t < lenB; ++t)
      p.model[q * pair + lenA + t] =
          static_cast<int64_t>(q * (lenA + lenB) + lenA + t);
  }
  plan_split_pairs(p, 0, n_blocks, lenA, lenB, kk + 1);
  for (uint64_t q = 0; q < n_blocks; ++q) {
    for (uint64_t t = 0; t < lenA; ++t)
      if (p.model[q * lenA + t] != static_cast<int64_t>(q * (lenA + lenB) + t))
        throw std::logic_error("pair split did not produce packed lists");
    for (uint64_t t = 0; t < lenB; ++t)
      if (p.model[n_blocks * lenA + q * lenB + t] !=
          static_cast<int64_t>(q * (lenA + lenB) + lenA + t))
        throw std::logic_error("pair split did not produce packed lists");
  }

  CircuitBuilder b;
  Wires l = b.add_register("l", static_cast<uint32_t>(width));
  emit_plan(b, l, p.ops, !inverse);
  return b.finalize();
}

}  // namespace fermenc

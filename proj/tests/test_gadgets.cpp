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

#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "doctest.h"

#include "fermenc/builder.hpp"
#include "fermenc/gadgets.hpp"
#include "fermenc/lower.hpp"
#include "fermenc/simulate.hpp"

using namespace fermenc;

namespace {

// Builds a circuit with a single data register of w qubits via emit, then
// checks every data assignment: unlowered simulate == lowered simulate ==
// model, phase untouched, ancillas back to zero.
void sweep(uint32_t w, const std::string& what,
           const std::function<void(CircuitBuilder&, const Wires&)>& emit,
           const std::function<void(std::vector<uint8_t>&)>& model) {
  CAPTURE(what);
  CircuitBuilder b;
  Wires d = b.add_register("d", w);
  emit(b, d);
  Circuit c = b.finalize();
  Circuit lc = lower(c);
  REQUIRE(is_lowered(lc));
  for (uint64_t v = 0; v < (1ull << w); ++v) {
    std::vector<uint8_t> data(w);
    for (uint32_t i = 0; i < w; ++i) data[i] = (v >> i) & 1;
    std::vector<uint8_t> want = data;
    model(want);
    DataRun r1 = run_on_data(c, data);
    DataRun r2 = run_on_data(lc, data);
    if (r1.data != want || !r1.ancillas_clean || r1.phase.exponent() != 0) {
      CAPTURE(v);
      FAIL(what << ": unlowered mismatch at v=" << v);
    }
    if (r2.data != want || !r2.ancillas_clean || r2.phase.exponent() != 0) {
      CAPTURE(v);
      FAIL(what << ": lowered mismatch at v=" << v);
    }
  }
}

uint64_t get(const std::vector<uint8_t>& d, size_t off, uint32_t w) {
  uint64_t v = 0;
  for (uint32_t i = 0; i < w; ++i) v |= uint64_t(d[off + i]) << i;
  return v;
}
void put(std::vector<uint8_t>& d, size_t off, uint32_t w, uint64_t v) {
  for (uint32_t i = 0; i < w; ++i) d[off + i] = (v >> i) & 1;
}

std::string tag(const char* base, std::initializer_list<uint64_t> vals) {
  std::string s = base;
  for (uint64_t v : vals) s += " " + std::to_string(v);
  return s;
}

}  // namespace

TEST_CASE("comparators match integer relations") {
  for (auto mode : {DepthMode::serial, DepthMode::logdepth}) {
    for (uint32_t w = 1; w <= 3; ++w) {
      for (uint64_t c = 0; c <= (1ull << w); ++c) {  // includes out-of-range c
        for (Rel rel : {Rel::lt, Rel::le, Rel::gt, Rel::ge, Rel::eq}) {
          sweep(w + 1, tag("cmp_const", {w, c, (uint64_t)rel, (uint64_t)mode}),
                [&](CircuitBuilder& b, const Wires& d) {
                  Wires x(d.begin(), d.begin() + w);
                  g_compare_const(b, x, c, rel, d[w], mode);
                },
                [&](std::vector<uint8_t>& d) {
                  if (rel_eval(rel, get(d, 0, w), c)) d[w] ^= 1;
                });
        }
      }
      for (Rel rel : {Rel::lt, Rel::le, Rel::gt, Rel::ge, Rel::eq}) {
        sweep(2 * w + 1, tag("cmp_reg", {w, (uint64_t)rel, (uint64_t)mode}),
              [&](CircuitBuilder& b, const Wires& d) {
                Wires x(d.begin(), d.begin() + w);
                Wires y(d.begin() + w, d.begin() + 2 * w);
                g_compare_reg(b, x, y, rel, d[2 * w], mode);
              },
              [&](std::vector<uint8_t>& d) {
                if (rel_eval(rel, get(d, 0, w), get(d, w, w))) d[2 * w] ^= 1;
              });
      }
    }
  }
}

TEST_CASE("adders and counters wrap modulo 2^w") {
  for (uint32_t w = 1; w <= 4; ++w) {
    uint64_t m = (1ull << w) - 1;
    for (uint64_t c = 0; c <= m; ++c) {
      sweep(w, tag("add_const", {w, c}),
            [&](CircuitBuilder& b, const Wires& d) { g_add_const(b, d, c); },
            [&](std::vector<uint8_t>& d) { put(d, 0, w, (get(d, 0, w) + c) & m); });
      sweep(w, tag("sub_const", {w, c}),
            [&](CircuitBuilder& b, const Wires& d) { g_sub_const(b, d, c); },
            [&](std::vector<uint8_t>& d) { put(d, 0, w, (get(d, 0, w) - c) & m); });
    }
    sweep(w, tag("inc", {w}),
          [&](CircuitBuilder& b, const Wires& d) { g_incr(b, d); },
          [&](std::vector<uint8_t>& d) { put(d, 0, w, (get(d, 0, w) + 1) & m); });
    sweep(w, tag("dec", {w}),
          [&](CircuitBuilder& b, const Wires& d) { g_decr(b, d); },
          [&](std::vector<uint8_t>& d) { put(d, 0, w, (get(d, 0, w) - 1) & m); });
    for (uint32_t wy = 1; wy <= w; ++wy) {
      sweep(w + wy, tag("add_reg", {w, wy}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              Wires y(d.begin() + w, d.begin() + w + wy);
              g_add_reg(b, x, y);
            },
            [&](std::vector<uint8_t>& d) {
              put(d, 0, w, (get(d, 0, w) + get(d, w, wy)) & m);
            });
      sweep(w + wy, tag("sub_reg", {w, wy}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              Wires y(d.begin() + w, d.begin() + w + wy);
              g_sub_reg(b, x, y);
            },
            [&](std::vector<uint8_t>& d) {
              put(d, 0, w, (get(d, 0, w) - get(d, w, wy)) & m);
            });
    }
  }
}

TEST_CASE("value exchange swaps exactly the named pair") {
  for (uint32_t w = 1; w <= 3; ++w) {
    uint64_t m = (1ull << w) - 1;
    for (uint64_t a = 0; a <= m; ++a)
      for (uint64_t c = 0; c <= m; ++c) {
        sweep(w, tag("exch", {w, a, c}),
              [&](CircuitBuilder& b, const Wires& d) { g_exchange_consts(b, d, a, c); },
              [&](std::vector<uint8_t>& d) {
                uint64_t v = get(d, 0, w);
                if (v == a) put(d, 0, w, c);
                else if (v == c) put(d, 0, w, a);
              });
      }
    for (uint64_t c = 0; c <= m; ++c) {
      sweep(2 * w, tag("exch_reg", {w, c}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              Wires y(d.begin() + w, d.end());
              g_exchange_reg(b, x, y, c);
            },
            [&](std::vector<uint8_t>& d) {
              uint64_t a = get(d, w, w), v = get(d, 0, w);
              if (a == c) return;
              if (v == a) put(d, 0, w, c);
              else if (v == c) put(d, 0, w, a);
            });
    }
  }
}

TEST_CASE("ordered swap, threshold swap, and gap exchange") {
  for (auto mode : {DepthMode::serial, DepthMode::logdepth}) {
    for (uint32_t w = 2; w <= 3; ++w) {
      uint64_t m = (1ull << w) - 1;
      for (uint64_t p = 0; p <= m; ++p) {
        sweep(2 * w, tag("Up", {w, p, (uint64_t)mode}),
              [&](CircuitBuilder& b, const Wires& d) {
                Wires x(d.begin(), d.begin() + w);
                Wires y(d.begin() + w, d.end());
                g_ordered_swap_Up(b, x, y, p, mode);
              },
              [&](std::vector<uint8_t>& d) {
                uint64_t x = get(d, 0, w), y = get(d, w, w);
                if ((x == p && y > p) || (y == p && x > p)) {
                  put(d, 0, w, y);
                  put(d, w, w, x);
                }
              });
        sweep(2 * w, tag("Sp", {w, p, (uint64_t)mode}),
              [&](CircuitBuilder& b, const Wires& d) {
                Wires x(d.begin(), d.begin() + w);
                Wires y(d.begin() + w, d.end());
                g_cond_swap_Sp(b, x, y, p, mode);
              },
              [&](std::vector<uint8_t>& d) {
                uint64_t x = get(d, 0, w), y = get(d, w, w);
                if (x >= p && y >= p) {
                  put(d, 0, w, y);
                  put(d, w, w, x);
                }
              });
        for (int hasleft = 0; hasleft <= 1; ++hasleft) {
          uint32_t nw = (hasleft ? 3 : 2) * w;
          sweep(nw, tag("Ep", {w, p, (uint64_t)mode, (uint64_t)hasleft}),
                [&](CircuitBuilder& b, const Wires& d) {
                  std::optional<Wires> x;
                  size_t off = 0;
                  if (hasleft) {
                    x = Wires(d.begin(), d.begin() + w);
                    off = w;
                  }
                  Wires y(d.begin() + off, d.begin() + off + w);
                  Wires z(d.begin() + off + w, d.begin() + off + 2 * w);
                  g_cond_exchange_Ep(b, x, y, z, p, mode);
                },
                [&](std::vector<uint8_t>& d) {
                  size_t off = hasleft ? w : 0;
                  if (p >= m || (hasleft && p == 0)) return;
                  bool lok = !hasleft || get(d, 0, w) < p;
                  bool rok = get(d, off + w, w) > p;
                  if (lok && rok) {
                    uint64_t y = get(d, off, w);
                    if (y == p) put(d, off, w, m);
                    else if (y == m) put(d, off, w, p);
                  }
                });
        }
      }
    }
  }
}

TEST_CASE("fanout copies a bit into every target") {
  for (uint32_t n = 1; n <= 5; ++n) {
    sweep(n + 1, tag("fanout", {n}),
          [&](CircuitBuilder& b, const Wires& d) {
            g_fanout(b, d[0], Wires(d.begin() + 1, d.end()));
          },
          [&](std::vector<uint8_t>& d) {
            // The tree xors copies pairwise; on arbitrary inputs the net
            // effect is this cascade, which on zeroed targets is a plain copy.
            std::vector<size_t> have{0};
            size_t next = 1;
            while (next < d.size()) {
              size_t hn = have.size();
              for (size_t i = 0; i < hn && next < d.size(); ++i) {
                d[next] ^= d[have[i]];
                have.push_back(next);
                ++next;
              }
            }
          });
  }
}

TEST_CASE("macros accept open and closed controls") {
  for (auto mode : {DepthMode::serial, DepthMode::logdepth}) {
    for (uint32_t w = 2; w <= 3; ++w) {
      uint64_t m = (1ull << w) - 1;
      sweep(w + 2, tag("ctrl add_const", {(uint64_t)mode, w}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              g_add_const(b, x, 3, {{d[w], true}, {d[w + 1], false}});
            },
            [&](std::vector<uint8_t>& d) {
              if (d[w] == 1 && d[w + 1] == 0) put(d, 0, w, (get(d, 0, w) + 3) & m);
            });
      sweep(w + 2, tag("ctrl cmp", {(uint64_t)mode, w}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              g_compare_const(b, x, 2, Rel::le, d[w], mode, {{d[w + 1], true}});
            },
            [&](std::vector<uint8_t>& d) {
              if (d[w + 1] && get(d, 0, w) <= 2) d[w] ^= 1;
            });
      sweep(w + 1, tag("ctrl exch", {(uint64_t)mode, w}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              g_exchange_consts(b, x, 1, m, {{d[w], true}});
            },
            [&](std::vector<uint8_t>& d) {
              if (!d[w]) return;
              uint64_t v = get(d, 0, w);
              if (v == 1) put(d, 0, w, m);
              else if (v == m) put(d, 0, w, 1);
            });
      sweep(2 * w + 1, tag("ctrl Up", {(uint64_t)mode, w}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              Wires y(d.begin() + w, d.begin() + 2 * w);
              g_ordered_swap_Up(b, x, y, 1, mode, {{d[2 * w], true}});
            },
            [&](std::vector<uint8_t>& d) {
              if (!d[2 * w]) return;
              uint64_t x = get(d, 0, w), y = get(d, w, w);
              if ((x == 1 && y > 1) || (y == 1 && x > 1)) {
                put(d, 0, w, y);
                put(d, w, w, x);
              }
            });
      sweep(3 * w + 1, tag("ctrl Ep", {(uint64_t)mode, w}),
            [&](CircuitBuilder& b, const Wires& d) {
              Wires x(d.begin(), d.begin() + w);
              Wires y(d.begin() + w, d.begin() + 2 * w);
              Wires z(d.begin() + 2 * w, d.begin() + 3 * w);
              g_cond_exchange_Ep(b, x, y, z, 1, mode, {{d[3 * w], true}});
            },
            [&](std::vector<uint8_t>& d) {
              if (!d[3 * w]) return;
              if (1 >= m) return;
              if (get(d, 0, w) < 1 && get(d, 2 * w, w) > 1) {
                uint64_t y = get(d, w, w);
                if (y == 1) put(d, w, w, m);
                else if (y == m) put(d, w, w, 1);
              }
            });
    }
  }
}

TEST_CASE("inverted circuit undoes macro sequences") {
  CircuitBuilder b;
  Wires d = b.add_register("d", 6);
  Wires x(d.begin(), d.begin() + 3);
  Wires y(d.begin() + 3, d.end());
  g_add_reg(b, x, y);
  g_add_const(b, x, 5);
  g_incr(b, y);
  g_ordered_swap_Up(b, x, y, 2, DepthMode::serial);
  Circuit c = b.finalize();
  Circuit ci = c.inverted();
  for (uint64_t v = 0; v < 64; ++v) {
    std::vector<uint8_t> data(6);
    for (int i = 0; i < 6; ++i) data[i] = (v >> i) & 1;
    DataRun fwd = run_on_data(c, data);
    DataRun back = run_on_data(ci, fwd.data);
    REQUIRE(back.data == data);
  }
}

TEST_CASE("lowered comparator depth grows logarithmically") {
  uint64_t prev = 0;
  for (uint32_t w : {8u, 16u, 32u, 64u}) {
    CircuitBuilder b;
    Wires d = b.add_register("d", w + 1);
    Wires x(d.begin(), d.begin() + w);
    g_compare_const(b, x, 3, Rel::lt, d[w], DepthMode::logdepth);
    Circuit lc = lower(b.finalize());
    uint64_t dep = lc.depth();
    CAPTURE(w);
    // Doubling the width should add roughly a constant number of layers.
    if (prev) CHECK(dep <= prev + 10);
    prev = dep;
  }
}

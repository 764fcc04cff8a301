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

#include <cstdint>
#include <optional>

#include "fermenc/circuit.hpp"
#include "fermenc/fock.hpp"

namespace fermenc {

// Level-j comparison on occupation strings: overall weight first, then the
// weight of the suffix b_{j+1..M}, then the reversed prefix b_j..b_1
// lexicographically, then the suffix lexicographically.
bool implicit_order_less(int j, const FockState& x, const FockState& y);

// Integer-label layout: every admitted occupation string (weight within
// fermions +- slack) is represented by a single binary number indexing a
// classically precomputed table. The table exists at M+1 "levels"; at level
// j it is sorted by the level-j order and grouped into power-of-two padded
// chapters, so that prefix-phase and single-bit updates become range tests,
// range swaps and modular adds on the label register. A trailing padding
// pool absorbs the slack needed to regroup chapters between levels; the
// register is sized to four times the state count rounded up to a power of
// two, i.e. two qubits beyond the bare state-count ceiling.
class ImplicitLayout {
 public:
  ImplicitLayout(int modes, int fermions, int slack);

  int modes() const { return modes_; }
  int fermions() const { return fermions_; }
  int slack() const { return slack_; }

  // Number of admitted occupation strings.
  uint64_t state_count() const { return states_; }
  // Bits in the label register.
  int label_width() const { return width_; }
  // 2^label_width; the label register addresses exactly this table.
  uint64_t array_len() const { return uint64_t{1} << width_; }

  // Position of b in the padded level-j table. Pre: b admitted, 0 <= j <= M.
  uint64_t label_encode(const FockState& b, int j) const;
  // Inverse; nullopt for padding slots. Labels past the table throw.
  std::optional<FockState> label_decode(uint64_t label, int j) const;

  // Relabeling from the level-j to the level-(j+1) table (padding slots
  // permute among themselves). 0 <= j < M.
  Circuit layer_step(int j, bool inverse = false) const;
  // On level-j labels: toggle occupation of mode j where the result stays
  // admitted, identity elsewhere. 1 <= j <= M.
  Circuit logical_x(int j) const;
  // On level-j labels: phase -1 exactly when mode j is occupied.
  Circuit logical_z(int j) const;

  // On level-0 labels: walk to level j, apply the logical op, walk back.
  Circuit bit_flip(int j) const;
  Circuit sgn_rank(int j) const;

 private:
  int modes_;
  int fermions_;
  int slack_;
  uint64_t states_;
  int width_;
};

// Standalone permutations of the 2^width table addressed by a width-bit
// register. All are exact permutations of the full index range.

// Indices in [i, i+n) advance by k (mod n), others fixed. Pre: 0 <= k < n,
// i + n <= 2^width.
Circuit build_rotate(uint64_t i, uint64_t k, uint64_t n, int width);

// Exchanges [posA, posA+lenA) with [posB, posB+lenB), preserving the order
// inside each block. Supported shapes: equal lengths at any disjoint
// positions, or adjacent blocks (posB == posA + lenA) of any lengths.
Circuit build_block_swap(uint64_t posA, uint64_t lenA, uint64_t posB,
                         uint64_t lenB, int width);

// A_1..A_n B_1..B_n -> A_1 B_1 .. A_n B_n over blocks of block_len = 2^c
// starting at index 0. A non-power-of-two n is first extended with blocks
// taken from the free tail of the table, which therefore must be unused.
Circuit build_simple_interleave(uint64_t n_blocks, uint64_t block_len,
                                int width, bool inverse = false);

// Interleaves n blocks of lenA = 2^kA with n blocks of lenB = 2^kB laid out
// as two adjacent lists from index 0, producing n pairs [A_i B_i] each
// padded to 2^(max(kA,kB)+1). Staging room is borrowed from and returned to
// the free tail of the table; width must leave enough of it.
Circuit build_interleave_padded(uint64_t n_blocks, uint64_t lenA,
                                uint64_t lenB, int width,
                                bool inverse = false);

}  // namespace fermenc

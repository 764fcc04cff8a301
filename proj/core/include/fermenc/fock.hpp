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
#include <string>
#include <vector>

#include "fermenc/phase.hpp"

namespace fermenc {

// Occupation-number basis state b_1 ... b_M over M modes, 1-indexed.
class FockState {
 public:
  FockState() = default;
  explicit FockState(int modes) : bits_(modes, 0) {}
  // Parses "0100"-style strings, b_1 first.
  static FockState from_string(const std::string& s);

  int modes() const { return static_cast<int>(bits_.size()); }
  int bit(int j) const { return bits_[static_cast<size_t>(j - 1)]; }
  void set_bit(int j, int v) { bits_[static_cast<size_t>(j - 1)] = static_cast<uint8_t>(v); }
  void flip(int j) { bits_[static_cast<size_t>(j - 1)] ^= 1; }

  int weight() const;
  // Parity of b_1 + ... + b_j (j may be 0 -> even).
  int prefix_parity(int j) const;
  // Sorted 0-based positions of the occupied modes.
  std::vector<uint32_t> occupied_positions() const;

  std::string str() const;
  bool operator==(const FockState&) const = default;
  // Lexicographic on b_1 b_2 ... (b_1 most significant).
  bool lex_less(const FockState& o) const;

  const std::vector<uint8_t>& raw() const { return bits_; }

 private:
  std::vector<uint8_t> bits_;
};

// Occupancy promise F-k <= weight <= F+k, clamped to [0, M].
struct Capacity {
  int fermions = 0;  // F
  int slack = 0;     // k
  int lo(int modes) const;
  int hi(int modes) const;
  bool admits(const FockState& b) const;
};

// sgn-rank(j, b) = product over n <= j of (-1)^{b_n}; returns +1 or -1.
int sgn_rank_oracle(int j, const FockState& b);

// bit-flip(j, b): b with bit j negated.
FockState bit_flip_oracle(int j, const FockState& b);

// Majorana action on a basis state, mu in [1, 2M]:
//   mu = 2j-1: phase (-1)^{b_1+...+b_{j-1}},  flip bit j
//   mu = 2j  : phase i * (-1)^{b_1+...+b_j},  flip bit j (input bits)
struct MajoranaAction {
  QuarterPhase phase;
  FockState state;
};
MajoranaAction majorana_oracle(int mu, const FockState& b);

// ceil(log2 C(M, F)): minimum qubits for the fixed-weight sector. Exact
// big-integer binomial underneath.
int info_bound(int modes, int fermions);

// Number of strings with weight in the capacity window.
uint64_t capacity_state_count(int modes, const Capacity& cap);

// All capacity states ordered by weight, then lexicographically.
std::vector<FockState> enumerate_capacity_states(int modes, const Capacity& cap);

// C(n, k) as uint64; throws std::overflow_error if it does not fit.
uint64_t binomial_u64(int n, int k);

}  // namespace fermenc

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

#include "fermenc/fock.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace fermenc {

using boost::multiprecision::cpp_int;

FockState FockState::from_string(const std::string& s) {
  FockState b(static_cast<int>(s.size()));
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      b.bits_[i] = 1;
    } else if (s[i] != '0') {
      throw std::invalid_argument("FockState: expected a 0/1 string, got " + s);
    }
  }
  return b;
}

int FockState::weight() const {
  int w = 0;
  for (uint8_t b : bits_) w += b;
  return w;
}

int FockState::prefix_parity(int j) const {
  int p = 0;
  for (int n = 1; n <= j; ++n) p ^= bits_[static_cast<size_t>(n - 1)];
  return p;
}

std::vector<uint32_t> FockState::occupied_positions() const {
  std::vector<uint32_t> pos;
  for (uint32_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) pos.push_back(i);
  return pos;
}

std::string FockState::str() const {
  std::string s(bits_.size(), '0');
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

bool FockState::lex_less(const FockState& o) const {
  return bits_ < o.bits_;
}

int Capacity::lo(int modes) const {
  (void)modes;
  return std::max(0, fermions - slack);
}

int Capacity::hi(int modes) const {
  return std::min(modes, fermions + slack);
}

bool Capacity::admits(const FockState& b) const {
  int w = b.weight();
  return w >= lo(b.modes()) && w <= hi(b.modes());
}

int sgn_rank_oracle(int j, const FockState& b) {
  if (j < 1 || j > b.modes()) throw std::out_of_range("sgn_rank_oracle: j");
  return b.prefix_parity(j) ? -1 : 1;
}

FockState bit_flip_oracle(int j, const FockState& b) {
  if (j < 1 || j > b.modes()) throw std::out_of_range("bit_flip_oracle: j");
  FockState r = b;
  r.flip(j);
  return r;
}

MajoranaAction majorana_oracle(int mu, const FockState& b) {
  if (mu < 1 || mu > 2 * b.modes()) throw std::out_of_range("majorana_oracle: mu");
  int j = (mu + 1) / 2;
  MajoranaAction out{QuarterPhase::one(), b};
  if (mu % 2 == 1) {
    if (b.prefix_parity(j - 1)) out.phase = QuarterPhase::minus_one();
  } else {
    out.phase = QuarterPhase::i();
    if (b.prefix_parity(j)) out.phase *= QuarterPhase::minus_one();
  }
  out.state.flip(j);
  return out;
}

namespace {

cpp_int binomial_big(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  cpp_int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

}  // namespace

int info_bound(int modes, int fermions) {
  cpp_int c = binomial_big(modes, fermions);
  if (c <= 0) throw std::invalid_argument("info_bound: empty sector");
  if (c == 1) return 0;
  // ceil(log2 c) = bit length of c-1.
  cpp_int m = c - 1;
  int bits = 0;
  while (m > 0) {
    ++bits;
    m >>= 1;
  }
  return bits;
}

uint64_t binomial_u64(int n, int k) {
  cpp_int c = binomial_big(n, k);
  if (c > std::numeric_limits<uint64_t>::max())
    throw std::overflow_error("binomial_u64: value exceeds 64 bits");
  return static_cast<uint64_t>(c);
}

uint64_t capacity_state_count(int modes, const Capacity& cap) {
  uint64_t total = 0;
  for (int w = cap.lo(modes); w <= cap.hi(modes); ++w)
    total += binomial_u64(modes, w);
  return total;
}

std::vector<FockState> enumerate_capacity_states(int modes, const Capacity& cap) {
  std::vector<FockState> out;
  for (int w = cap.lo(modes); w <= cap.hi(modes); ++w) {
    // Lexicographically ascending strings of fixed weight: start with the
    // ones packed at the right end and step with the classic next-combination.
    std::vector<uint8_t> mask(static_cast<size_t>(modes), 0);
    for (int i = 0; i < w; ++i) mask[static_cast<size_t>(modes - 1 - i)] = 1;
    std::sort(mask.begin(), mask.end());  // all-zero prefix form for w=0 too
    // mask is now the lexicographically smallest arrangement as a vector of
    // 0/1 read b_1..b_M? std::sort gives 0...01...1 which is smallest.
    while (true) {
      FockState b(modes);
      for (int i = 0; i < modes; ++i)
        if (mask[static_cast<size_t>(i)]) b.set_bit(i + 1, 1);
      out.push_back(b);
      if (!std::next_permutation(mask.begin(), mask.end())) break;
    }
  }
  return out;
}

}  // namespace fermenc

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

#include <complex>
#include <cstdint>

namespace fermenc {

// Exact phase i^v with v in {0,1,2,3}. All phases produced by the gate set
// used here (X, Z, S, swaps, controlled versions) are powers of i, so we
// track them as integers instead of floats.
class QuarterPhase {
 public:
  constexpr QuarterPhase() = default;
  constexpr explicit QuarterPhase(int v) : v_(static_cast<uint8_t>(((v % 4) + 4) % 4)) {}

  constexpr int exponent() const { return v_; }

  constexpr QuarterPhase operator*(QuarterPhase o) const {
    return QuarterPhase(v_ + o.v_);
  }
  QuarterPhase& operator*=(QuarterPhase o) {
    v_ = static_cast<uint8_t>((v_ + o.v_) & 3);
    return *this;
  }
  constexpr bool operator==(const QuarterPhase&) const = default;

  std::complex<double> value() const {
    switch (v_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  static constexpr QuarterPhase one() { return QuarterPhase(0); }
  static constexpr QuarterPhase i() { return QuarterPhase(1); }
  static constexpr QuarterPhase minus_one() { return QuarterPhase(2); }
  static constexpr QuarterPhase minus_i() { return QuarterPhase(3); }

 private:
  uint8_t v_ = 0;
};

}  // namespace fermenc

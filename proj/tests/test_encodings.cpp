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

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"

#include "fermenc/encoding.hpp"
#include "fermenc/fermion_ops.hpp"
#include "fermenc/fock.hpp"
#include "fermenc/lower.hpp"
#include "fermenc/simulate.hpp"

using namespace fermenc;

namespace {

// All fock states the encoding promises to handle.
std::vector<FockState> promise_states(const Encoding& enc) {
  std::vector<FockState> out;
  int m = enc.modes();
  for (uint64_t v = 0; v < (1ull << m); ++v) {
    FockState b(m);
    for (int j = 1; j <= m; ++j)
      if ((v >> (j - 1)) & 1) b.set_bit(j, 1);
    if (enc.can_encode(b)) out.push_back(b);
  }
  return out;
}

// Simulates both queries for every promise state and index against the
// occupation-basis definitions; optionally on the fully lowered circuits.
void oracle_sweep(const Encoding& enc, bool lowered) {
  CAPTURE(enc.name());
  CAPTURE(enc.modes());
  CAPTURE(lowered);
  auto states = promise_states(enc);
  for (int j = 1; j <= enc.modes(); ++j) {
    Circuit cs = enc.sgn_rank_circuit(j);
    Circuit cf = enc.bit_flip_circuit(j);
    if (lowered) {
      cs = lower(cs);
      cf = lower(cf);
    }
    for (const FockState& b : states) {
      auto data = enc.encode(b);
      CAPTURE(j);
      CAPTURE(b.str());

      DataRun rs = run_on_data(cs, data);
      REQUIRE(rs.ancillas_clean);
      REQUIRE(rs.data == data);
      int want = sgn_rank_oracle(j, b);
      REQUIRE(rs.phase == (want > 0 ? QuarterPhase::one() : QuarterPhase::minus_one()));

      FockState flipped = bit_flip_oracle(j, b);
      if (!enc.can_encode(flipped)) continue;
      DataRun rf = run_on_data(cf, data);
      REQUIRE(rf.ancillas_clean);
      REQUIRE(rf.phase == QuarterPhase::one());
      REQUIRE(enc.decode(rf.data) == flipped);
    }
  }
}

// Runs the indexed variants with every j loaded into the index register.
void select_sweep(const Encoding& enc) {
  CAPTURE(enc.name());
  CAPTURE(enc.modes());
  Circuit cs = compile_select(enc, SelectOp::sgn_rank);
  Circuit cf = compile_select(enc, SelectOp::bit_flip);
  int iw = enc.select_index_width();
  auto states = promise_states(enc);
  for (int j = 1; j <= enc.modes(); ++j) {
    for (const FockState& b : states) {
      CAPTURE(j);
      CAPTURE(b.str());
      auto data = enc.encode(b);
      std::vector<uint8_t> in = data;
      for (int t = 0; t < iw; ++t)
        in.push_back(static_cast<uint8_t>(((j - 1) >> t) & 1));

      DataRun rs = run_on_data(cs, in);
      REQUIRE(rs.ancillas_clean);
      REQUIRE(rs.data == in);
      int want = sgn_rank_oracle(j, b);
      REQUIRE(rs.phase == (want > 0 ? QuarterPhase::one() : QuarterPhase::minus_one()));

      FockState flipped = bit_flip_oracle(j, b);
      if (!enc.can_encode(flipped)) continue;
      DataRun rf = run_on_data(cf, in);
      REQUIRE(rf.ancillas_clean);
      REQUIRE(rf.phase == QuarterPhase::one());
      std::vector<uint8_t> got(rf.data.begin(), rf.data.end() - iw);
      std::vector<uint8_t> idx(rf.data.end() - iw, rf.data.end());
      for (int t = 0; t < iw; ++t)
        REQUIRE(idx[static_cast<size_t>(t)] == (((j - 1) >> t) & 1));
      REQUIRE(enc.decode(got) == flipped);
    }
  }
}

}  // namespace

TEST_CASE("occupation-count qubit formulas") {
  CHECK(make_encoding("sorted", 63, 8)->data_qubits() == 48);
  CHECK(make_encoding("sorted", 8, 3)->data_qubits() == 3 * 4);
  CHECK(make_encoding("buffered", 8, 3)->data_qubits() == 8 * 4);
  CHECK(make_encoding("jordan-wigner", 63, 8)->data_qubits() == 63);
  // F(w - G) + 2^G + F - 1 with w = 6, G = 3.
  CHECK(make_encoding("succinct", 63, 8)->data_qubits() == 39);
  CHECK(make_encoding("succinct", 8, 4)->data_qubits() == 4 * 2 + 7);
}

TEST_CASE("sorted layout stores ascending positions with a top filler") {
  auto enc = make_encoding("sorted", 6, 2);
  FockState b = FockState::from_string("010010");
  auto data = enc->encode(b);
  // w = 3; occupied modes 2 and 5 sit at 0-based 1 and 4; empty slots at 7.
  auto val = [&](int reg) {
    uint64_t v = 0;
    for (int t = 0; t < 3; ++t) v |= uint64_t(data[static_cast<size_t>(3 * reg + t)]) << t;
    return v;
  };
  CHECK(val(0) == 1);
  CHECK(val(1) == 4);
  CHECK(enc->decode(data) == b);

  FockState empty(6);
  auto edata = enc->encode(empty);
  for (uint8_t bit : edata) CHECK(bit == 1);
  CHECK_THROWS(enc->encode(FockState::from_string("111000")));
}

TEST_CASE("buffered layout interleaves occupied slots with fillers") {
  auto enc = make_encoding("buffered", 8, 3);
  FockState b = FockState::from_string("01001000");
  auto data = enc->encode(b);
  auto val = [&](int slot) {
    uint64_t v = 0;
    for (int t = 0; t < 4; ++t) v |= uint64_t(data[static_cast<size_t>(4 * slot + t)]) << t;
    return v;
  };
  // Slots: b0 l1 b1 l2 b2 l3 b3 sentinel; positions 1 and 4 in l1, l2.
  CHECK(val(0) == 15);
  CHECK(val(1) == 1);
  CHECK(val(3) == 4);
  CHECK(val(5) == 15);
  CHECK(val(7) == 15);
  CHECK(enc->decode(data) == b);
  CHECK_THROWS(enc->encode(FockState::from_string("11100000")));  // weight == F
}

TEST_CASE("succinct layout packs low remainders and an occupancy string") {
  auto enc = make_encoding("succinct", 63, 8);
  // w = 6, G = 3, wl = 3, H = 15. Occupied 0-based positions
  // {7, 11, 13, 20, 38, 58, 60} plus one filler slot at 63.
  FockState b(63);
  for (int p : {7, 11, 13, 20, 38, 58, 60}) b.set_bit(p + 1, 1);
  auto data = enc->encode(b);
  auto low = [&](int slot) {
    uint64_t v = 0;
    for (int t = 0; t < 3; ++t)
      v |= uint64_t(data[static_cast<size_t>(3 * slot + t)]) << t;
    return v;
  };
  const uint64_t lows[8] = {7, 3, 5, 4, 6, 2, 4, 7};
  for (int i = 0; i < 8; ++i) CHECK(low(i) == lows[i]);
  std::vector<int> stars;
  for (int q = 0; q < 15; ++q)
    if (data[static_cast<size_t>(24 + q)]) stars.push_back(q);
  CHECK(stars == std::vector<int>{0, 2, 3, 5, 8, 12, 13, 14});
  CHECK(enc->decode(data) == b);
  CHECK_THROWS(enc->encode(FockState::from_string(std::string(8, '1') +
                                                  std::string(55, '0'))));
}

TEST_CASE("counting-tree layout adds running zero counts") {
  auto enc = make_encoding("succinct-tree", 63, 8);
  // Same slot layout as "succinct" (39 bits) plus counts over the string
  // halves: [0,8) and its half [0,4), then [8,12) under the right window.
  CHECK(enc->data_qubits() == 49);
  FockState b(63);
  for (int p : {7, 11, 13, 20, 38, 58, 60}) b.set_bit(p + 1, 1);
  auto data = enc->encode(b);
  auto field = [&](int off, int w) {
    uint64_t v = 0;
    for (int t = 0; t < w; ++t)
      v |= uint64_t(data[static_cast<size_t>(off + t)]) << t;
    return v;
  };
  std::vector<int> stars;
  for (int q = 0; q < 15; ++q)
    if (data[static_cast<size_t>(24 + q)]) stars.push_back(q);
  CHECK(stars == std::vector<int>{0, 2, 3, 5, 8, 12, 13, 14});
  CHECK(field(39, 4) == 4);  // zeros in [0, 8)
  CHECK(field(43, 3) == 1);  // zeros in [0, 4)
  CHECK(field(46, 3) == 3);  // zeros in [8, 12)
  CHECK(enc->decode(data) == b);
  auto bad = data;
  bad[39] ^= 1;
  CHECK_THROWS_AS((void)enc->decode(bad), std::invalid_argument);
}

TEST_CASE("counting-tree queries match the oracle") {
  for (int m : {4, 5, 6, 8})
    for (int f : {1, 2, 3, 4})
      oracle_sweep(*make_encoding("succinct-tree", m, f), false);
  oracle_sweep(*make_encoding("succinct-tree", 7, 5), false);  // empty remainders
  oracle_sweep(*make_encoding("succinct-tree", 12, 6), false);  // two tree levels
  oracle_sweep(*make_encoding("succinct-tree", 6, 3), true);
}

TEST_CASE("jordan-wigner queries match the oracle") {
  for (int m : {4, 6}) oracle_sweep(*make_encoding("jordan-wigner", m, m / 2), false);
  oracle_sweep(*make_encoding("jordan-wigner", 5, 2), true);
}

TEST_CASE("sorted queries match the oracle") {
  for (int m : {4, 5, 6, 7, 8})
    for (int f : {0, 1, 2, 3}) oracle_sweep(*make_encoding("sorted", m, f), false);
  oracle_sweep(*make_encoding("sorted", 6, 2), true);
}

TEST_CASE("buffered queries match the oracle") {
  for (int m : {4, 5, 6, 8})
    for (int f : {1, 2, 3}) oracle_sweep(*make_encoding("buffered", m, f), false);
  oracle_sweep(*make_encoding("buffered", 5, 2), true);
}

TEST_CASE("succinct queries match the oracle") {
  for (int m : {4, 5, 6, 8})
    for (int f : {1, 2, 3, 4}) oracle_sweep(*make_encoding("succinct", m, f), false);
  oracle_sweep(*make_encoding("succinct", 7, 5), false);  // empty remainders
  oracle_sweep(*make_encoding("succinct", 6, 3), true);
}

TEST_CASE("implicit queries match the oracle") {
  for (int m : {4, 5, 6})
    for (int k : {0, 1})
      for (int f = 1; f < m; ++f) oracle_sweep(*make_encoding("implicit", m, f, k), false);
  oracle_sweep(*make_encoding("implicit", 5, 2, 1), true);
}

TEST_CASE("indexed queries thread j through a register") {
  select_sweep(*make_encoding("jordan-wigner", 5, 2));
  select_sweep(*make_encoding("sorted", 6, 2));
  select_sweep(*make_encoding("buffered", 6, 2));
  select_sweep(*make_encoding("succinct", 6, 3));
  select_sweep(*make_encoding("succinct", 7, 5));
  select_sweep(*make_encoding("succinct", 8, 3));
  select_sweep(*make_encoding("succinct-tree", 6, 3));
  select_sweep(*make_encoding("succinct-tree", 8, 4));
  select_sweep(*make_encoding("implicit", 4, 2, 1));
  select_sweep(*make_encoding("implicit", 5, 2, 1));
}

TEST_CASE("degenerate layouts produce valid circuits") {
  auto enc = make_encoding("sorted", 8, 0);
  Circuit c = enc->bit_flip_circuit(1);
  CHECK(c.data_width() == 0);
  Circuit cs = enc->sgn_rank_circuit(3);
  DataRun r = run_on_data(cs, {});
  CHECK(r.phase == QuarterPhase::one());
}

TEST_CASE("majorana circuits reproduce the operator algebra") {
  auto check = [](const Encoding& enc) {
    CAPTURE(enc.name());
    for (int mu = 1; mu <= 2 * enc.modes(); ++mu) {
      CompiledOperator u = compile_majorana(enc, mu);
      for (const FockState& b : promise_states(enc)) {
        MajoranaAction want = majorana_oracle(mu, b);
        if (!enc.can_encode(want.state)) continue;
        DataRun r = run_on_data(u.circuit, enc.encode(b));
        REQUIRE(r.ancillas_clean);
        REQUIRE(enc.decode(r.data) == want.state);
        REQUIRE((r.phase * u.phase) == want.phase);
      }
    }
  };
  for (const char* name :
       {"jordan-wigner", "sorted", "buffered", "succinct", "succinct-tree"}) {
    int f = std::string(name) == "sorted" ? 3 : 4;  // admit weights up to 3
    check(*make_encoding(name, 5, f));
  }
  check(*make_encoding("implicit", 5, 2, 2));
}

TEST_CASE("rotation evaluation matches the two-branch formula") {
  auto enc = make_encoding("sorted", 4, 2);
  RotationSpec spec;
  spec.generator.indices = {1, 4};  // hop between modes 1 and 2
  spec.theta = 0.3;
  FockState b = FockState::from_string("1000");
  auto branches = evaluate_rotation(*enc, spec, enc->encode(b));
  REQUIRE(branches.size() == 2);
  bool saw_stay = false, saw_move = false;
  for (const auto& br : branches) {
    FockState s = enc->decode(br.data);
    if (s == b) {
      saw_stay = true;
      CHECK(std::abs(br.amplitude - std::complex<double>(std::cos(0.3), 0)) < 1e-12);
    } else {
      saw_move = true;
      CHECK(s == FockState::from_string("0100"));
      CHECK(std::abs(std::abs(br.amplitude) - std::abs(std::sin(0.3))) < 1e-12);
    }
  }
  CHECK(saw_stay);
  CHECK(saw_move);
}

TEST_CASE("rotation evaluation works over the implicit labels") {
  auto enc = make_encoding("implicit", 4, 2, 1);
  RotationSpec spec;
  spec.generator.indices = {1, 4};  // hop between modes 1 and 2
  spec.theta = 0.7;
  FockState b = FockState::from_string("1010");
  auto branches = evaluate_rotation(*enc, spec, enc->encode(b));
  REQUIRE(branches.size() == 2);
  for (const auto& br : branches) {
    FockState s = enc->decode(br.data);
    if (s == b) {
      CHECK(std::abs(br.amplitude - std::complex<double>(std::cos(0.7), 0)) < 1e-12);
    } else {
      CHECK(s == FockState::from_string("0110"));
      CHECK(std::abs(std::abs(br.amplitude) - std::abs(std::sin(0.7))) < 1e-12);
    }
  }
}

TEST_CASE("rotation at a quarter turn has a single branch") {
  auto enc = make_encoding("sorted", 4, 2);
  RotationSpec spec;
  spec.generator.indices = {1, 4};
  spec.theta = std::acos(-1.0) / 2;
  FockState b = FockState::from_string("1000");
  auto branches = evaluate_rotation(*enc, spec, enc->encode(b));
  REQUIRE(branches.size() == 1);
  CHECK(enc->decode(branches[0].data) == FockState::from_string("0100"));
}

TEST_CASE("unknown encoding names are rejected") {
  CHECK_THROWS_AS((void)make_encoding("nope", 4, 2), std::invalid_argument);
  CHECK(encoding_names().size() == 6);
}

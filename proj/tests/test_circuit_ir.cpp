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

#include <vector>

#include "doctest.h"

#include "fermenc/builder.hpp"
#include "fermenc/circuit.hpp"
#include "fermenc/gadgets.hpp"
#include "fermenc/lower.hpp"
#include "fermenc/phase.hpp"
#include "fermenc/serialize.hpp"
#include "fermenc/simulate.hpp"

using namespace fermenc;

TEST_CASE("registers lay out contiguously and split data from ancilla") {
  Circuit c;
  c.add_register("a", 3);
  c.add_register("b", 2, true);
  c.add_register("c", 4);
  CHECK(c.width() == 9);
  CHECK(c.register_offset(0) == 0);
  CHECK(c.register_offset(1) == 3);
  CHECK(c.register_offset(2) == 5);
  CHECK(c.data_width() == 7);
  CHECK(c.ancilla_width() == 2);
  CHECK(c.find_register("b").value() == 1);
  CHECK(!c.find_register("missing").has_value());
  std::vector<Qubit> dq = data_qubits(c);
  CHECK(dq == std::vector<Qubit>{0, 1, 2, 5, 6, 7, 8});
}

TEST_CASE("quarter phases multiply as powers of i") {
  QuarterPhase p = QuarterPhase::i();
  CHECK((p * p) == QuarterPhase::minus_one());
  CHECK((p * p * p) == QuarterPhase::minus_i());
  CHECK((p * QuarterPhase::minus_i()) == QuarterPhase::one());
  CHECK(QuarterPhase(-1) == QuarterPhase(3));
  CHECK(QuarterPhase::i().value() == std::complex<double>(0.0, 1.0));
}

TEST_CASE("primitive gates act on basis states with exact phases") {
  Circuit c;
  c.add_register("d", 3);

  auto run = [&](std::vector<uint8_t> bits) {
    BasisPhaseState s{std::move(bits), QuarterPhase()};
    return simulate(c, s);
  };

  c.append(Gate{GateKind::X, {0}});
  auto s = run({0, 0, 0});
  CHECK(s.bits == std::vector<uint8_t>{1, 0, 0});
  CHECK(s.phase.exponent() == 0);

  c.mutable_gates().clear();
  c.append(Gate{GateKind::Z, {0}});
  CHECK(run({1, 0, 0}).phase == QuarterPhase::minus_one());
  CHECK(run({0, 1, 0}).phase == QuarterPhase::one());

  c.mutable_gates().clear();
  c.append(Gate{GateKind::S, {1}});
  CHECK(run({0, 1, 0}).phase == QuarterPhase::i());
  CHECK(run({1, 0, 0}).phase == QuarterPhase::one());

  c.mutable_gates().clear();
  c.append(Gate{GateKind::Swap, {0, 2}});
  CHECK(run({1, 0, 0}).bits == std::vector<uint8_t>{0, 0, 1});

  c.mutable_gates().clear();
  c.append(Gate{GateKind::Cz, {0, 1}});
  CHECK(run({1, 1, 0}).phase == QuarterPhase::minus_one());
  CHECK(run({1, 0, 0}).phase == QuarterPhase::one());

  c.mutable_gates().clear();
  c.append(Gate{GateKind::Mcx, {2}, {{0, true}, {1, false}}});
  CHECK(run({1, 0, 0}).bits == std::vector<uint8_t>{1, 0, 1});
  CHECK(run({1, 1, 0}).bits == std::vector<uint8_t>{1, 1, 0});
  CHECK(run({0, 0, 0}).bits == std::vector<uint8_t>{0, 0, 0});
}

TEST_CASE("serialization round-trips gates, controls, and macro payloads") {
  CircuitBuilder b;
  Wires d = b.add_register("d", 4);
  Wires x(d.begin(), d.begin() + 2);
  b.x(d[0]);
  b.s(d[1]);
  b.begin_scratch();
  b.cx(d[0], d[2], false);
  b.end_scratch();
  g_add_const(b, x, 3, {{d[3], true}});
  Circuit c = b.finalize();

  std::string text = serialize(c);
  Circuit back = deserialize(text);
  REQUIRE(back.width() == c.width());
  REQUIRE(back.gates().size() == c.gates().size());
  for (size_t i = 0; i < c.gates().size(); ++i) CHECK(back.gates()[i] == c.gates()[i]);
  CHECK(serialize(back) == text);
  CHECK(!to_text(c).empty());
}

TEST_CASE("deserialize reports the offending line") {
  CHECK_THROWS_AS(deserialize("{\"bad\": 1}\n"), ParseError);
}

TEST_CASE("inversion reverses order and inverts each gate") {
  CircuitBuilder b;
  Wires d = b.add_register("d", 2);
  b.s(d[0]);
  g_incr(b, d);
  Circuit c = b.finalize();
  Circuit ci = c.inverted();
  for (uint64_t v = 0; v < 4; ++v) {
    BasisPhaseState s{{static_cast<uint8_t>(v & 1), static_cast<uint8_t>(v >> 1)},
                      QuarterPhase()};
    BasisPhaseState mid = simulate(c, s);
    BasisPhaseState back = simulate(ci, mid);
    CHECK(back.bits == s.bits);
    CHECK(back.phase == QuarterPhase::one());
  }
}

TEST_CASE("builder pool materializes as one trailing ancilla register") {
  CircuitBuilder b;
  Wires d = b.add_register("d", 2);
  Qubit t1 = b.borrow();
  Qubit t2 = b.borrow();
  CHECK(t1 >= kPoolBase);
  CHECK(t2 == t1 + 1);
  b.cx(d[0], t1);
  b.cx(d[1], t2);
  b.cx(d[1], t2);
  b.cx(d[0], t1);
  b.release(t2);
  b.release(t1);
  Qubit t3 = b.borrow();  // LIFO reuse
  CHECK(t3 == t1);
  b.release(t3);
  Circuit c = b.finalize();
  REQUIRE(c.registers().size() == 2);
  CHECK(c.registers().back().name == "anc");
  CHECK(c.registers().back().ancilla);
  CHECK(c.registers().back().width == 2);
  CHECK(c.gates().front().targets[0] == 2);  // pool id remapped after data
}

TEST_CASE("lowering expands wide mcx exactly") {
  for (uint32_t n = 3; n <= 6; ++n) {
    CircuitBuilder b;
    Wires d = b.add_register("d", n + 1);
    std::vector<Control> cs;
    for (uint32_t i = 0; i < n; ++i) cs.push_back({d[i], (i % 3) != 0});
    b.mcx(cs, d[n]);
    Circuit c = b.finalize();
    Circuit lc = lower(c);
    REQUIRE(is_lowered(lc));
    for (uint64_t v = 0; v < (1ull << (n + 1)); ++v) {
      std::vector<uint8_t> data(n + 1);
      for (uint32_t i = 0; i <= n; ++i) data[i] = (v >> i) & 1;
      DataRun r1 = run_on_data(c, data);
      DataRun r2 = run_on_data(lc, data);
      REQUIRE(r1.data == r2.data);
      REQUIRE(r2.ancillas_clean);
      REQUIRE(r1.phase == r2.phase);
    }
  }
}

TEST_CASE("independent gates stay parallel after lowering") {
  CircuitBuilder b;
  Wires d = b.add_register("d", 12);
  for (int g = 0; g < 3; ++g) {
    std::vector<Control> cs;
    for (int i = 0; i < 3; ++i) cs.push_back({d[static_cast<size_t>(4 * g + i)], true});
    b.mcx(cs, d[static_cast<size_t>(4 * g + 3)]);
  }
  Circuit lc = lower(b.finalize());

  CircuitBuilder b1;
  Wires e = b1.add_register("d", 4);
  b1.mcx({{e[0], true}, {e[1], true}, {e[2], true}}, e[3]);
  Circuit one = lower(b1.finalize());

  CHECK(lc.depth() == one.depth());
}

TEST_CASE("gate counts distinguish toffoli weight") {
  CircuitBuilder b;
  Wires d = b.add_register("d", 4);
  b.x(d[0]);
  b.mcx({{d[0], true}, {d[1], true}}, d[2]);
  Circuit c = b.finalize();
  GateCounts gc = c.gate_counts();
  CHECK(gc.total == 2);
  CHECK(gc.toffoli == 1);
  CHECK(gc.total_1q2q == 1);
  CHECK(gc.weighted_total == 1 + kToffoliExpansion);
}

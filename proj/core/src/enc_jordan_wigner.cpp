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

#include <stdexcept>

#include "fermenc/encoding.hpp"
#include "fermenc/gadgets.hpp"
#include "enc_internal.hpp"

namespace fermenc {

namespace {

// One qubit per mode; the baseline every other layout is measured against.
class JordanWigner final : public Encoding {
 public:
  JordanWigner(int modes, int fermions, int slack)
      : modes_(modes), cap_{fermions, slack} {}

  std::string name() const override { return "jordan-wigner"; }
  int modes() const override { return modes_; }
  Capacity capacity() const override { return cap_; }
  int data_qubits() const override { return modes_; }

  bool can_encode(const FockState& b) const override {
    return b.modes() == modes_;
  }

  std::vector<uint8_t> encode(const FockState& b) const override {
    std::vector<uint8_t> data(static_cast<size_t>(modes_));
    for (int j = 1; j <= modes_; ++j)
      data[static_cast<size_t>(j - 1)] = static_cast<uint8_t>(b.bit(j));
    return data;
  }

  FockState decode(const std::vector<uint8_t>& data) const override {
    FockState b(modes_);
    for (int j = 1; j <= modes_; ++j)
      b.set_bit(j, data[static_cast<size_t>(j - 1)]);
    return b;
  }

  void add_data_registers(CircuitBuilder& b) const override {
    b.add_register("mode", static_cast<uint32_t>(modes_));
  }

  Circuit sgn_rank_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    for (int i = 0; i < j; ++i) b.z(static_cast<Qubit>(i));
    return b.finalize();
  }

  Circuit bit_flip_circuit(int j) const override {
    check_index(j);
    CircuitBuilder b;
    add_data_registers(b);
    b.x(static_cast<Qubit>(j - 1));
    return b.finalize();
  }

  Circuit sgn_rank_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = add_index(b);
    // Mode i picks up a Z whenever i <= j, i.e. idx >= i-1.
    for (int i = 1; i <= modes_; ++i) {
      Qubit f = b.borrow();
      b.begin_scratch();
      g_compare_const(b, idx, static_cast<uint64_t>(i - 1), Rel::ge, f,
                      DepthMode::logdepth);
      b.end_scratch();
      b.cz(f, static_cast<Qubit>(i - 1));
      b.begin_scratch();
      g_compare_const(b, idx, static_cast<uint64_t>(i - 1), Rel::ge, f,
                      DepthMode::logdepth);
      b.end_scratch();
      b.release(f);
    }
    return b.finalize();
  }

  Circuit bit_flip_select() const override {
    CircuitBuilder b;
    add_data_registers(b);
    Wires idx = add_index(b);
    for (int i = 1; i <= modes_; ++i) {
      Qubit f = b.borrow();
      b.begin_scratch();
      g_compare_const(b, idx, static_cast<uint64_t>(i - 1), Rel::eq, f,
                      DepthMode::logdepth);
      b.end_scratch();
      b.cx(f, static_cast<Qubit>(i - 1));
      b.begin_scratch();
      g_compare_const(b, idx, static_cast<uint64_t>(i - 1), Rel::eq, f,
                      DepthMode::logdepth);
      b.end_scratch();
      b.release(f);
    }
    return b.finalize();
  }

 private:
  void check_index(int j) const {
    if (j < 1 || j > modes_) throw std::out_of_range("mode index out of range");
  }

  Wires add_index(CircuitBuilder& b) const {
    const uint32_t iw = static_cast<uint32_t>(select_index_width());
    return b.add_register("idx", iw);
  }

  int modes_;
  Capacity cap_;
};

}  // namespace

std::unique_ptr<Encoding> make_jordan_wigner(int modes, int fermions,
                                             int slack) {
  return std::make_unique<JordanWigner>(modes, fermions, slack);
}

}  // namespace fermenc

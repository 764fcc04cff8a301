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

#include "fermenc/implicit.hpp"
#include "enc_internal.hpp"

namespace fermenc {

namespace {

// Adapter exposing the integer-label table as an Encoding: the whole state
// is one label register, and both queries ride the level-walk circuits.
class ImplicitEnc final : public Encoding {
 public:
  ImplicitEnc(int modes, int fermions, int slack)
      : lay_(modes, fermions, slack) {}

  std::string name() const override { return "implicit"; }
  int modes() const override { return lay_.modes(); }
  Capacity capacity() const override {
    return Capacity{lay_.fermions(), lay_.slack()};
  }
  int data_qubits() const override { return lay_.label_width(); }

  bool can_encode(const FockState& b) const override {
    return b.modes() == lay_.modes() && capacity().admits(b);
  }

  std::vector<uint8_t> encode(const FockState& b) const override {
    uint64_t label = lay_.label_encode(b, 0);
    std::vector<uint8_t> out(static_cast<size_t>(lay_.label_width()));
    for (size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<uint8_t>((label >> i) & 1);
    return out;
  }

  FockState decode(const std::vector<uint8_t>& data) const override {
    if (data.size() != static_cast<size_t>(lay_.label_width()))
      throw std::invalid_argument("data width does not match the layout");
    uint64_t label = 0;
    for (size_t i = 0; i < data.size(); ++i) {
      if (data[i] > 1) throw std::invalid_argument("data bits must be 0/1");
      label |= static_cast<uint64_t>(data[i]) << i;
    }
    auto b = lay_.label_decode(label, 0);
    if (!b.has_value())
      throw std::invalid_argument("label points at a padding slot");
    return *b;
  }

  void add_data_registers(CircuitBuilder& b) const override {
    b.add_register("l", static_cast<uint32_t>(lay_.label_width()));
  }

  Circuit sgn_rank_circuit(int j) const override { return lay_.sgn_rank(j); }
  Circuit bit_flip_circuit(int j) const override { return lay_.bit_flip(j); }

 private:
  ImplicitLayout lay_;
};

}  // namespace

std::unique_ptr<Encoding> make_implicit(int modes, int fermions, int slack) {
  return std::make_unique<ImplicitEnc>(modes, fermions, slack);
}

}  // namespace fermenc

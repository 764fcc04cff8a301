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

#include <memory>
#include <string>
#include <vector>

#include "fermenc/builder.hpp"
#include "fermenc/circuit.hpp"
#include "fermenc/fock.hpp"

namespace fermenc {

// A second-quantized encoding: a reversible map from occupation states onto a
// register layout, plus circuit builders for the two primitive queries
//
//   sgn-rank(j):  phase (-1)^(b_1+...+b_j)
//   bit-flip(j):  b_j ^= 1
//
// with j in 1..modes. Circuits act on the data registers declared by
// add_data_registers; builders append borrowed ancillas as a trailing "anc"
// register which starts and ends in |0>.
class Encoding {
 public:
  virtual ~Encoding() = default;

  virtual std::string name() const = 0;
  virtual int modes() const = 0;
  // Set of occupation weights the layout promises to represent.
  virtual Capacity capacity() const = 0;
  // Width of the data layout, excluding ancillas.
  virtual int data_qubits() const = 0;

  virtual bool can_encode(const FockState& b) const = 0;
  // Data-register bit values (global order, LSB-first per register) for b.
  // Pre: can_encode(b).
  virtual std::vector<uint8_t> encode(const FockState& b) const = 0;
  // Inverse of encode. Pre: data is the image of some admissible state.
  virtual FockState decode(const std::vector<uint8_t>& data) const = 0;

  virtual void add_data_registers(CircuitBuilder& b) const = 0;

  virtual Circuit sgn_rank_circuit(int j) const = 0;
  virtual Circuit bit_flip_circuit(int j) const = 0;

  // Indexed variants: the mode index arrives in a trailing "idx" register
  // holding j-1, which is left unchanged. Default implementation dispatches
  // over all j with an equality test per branch; encodings override it when
  // the constant j can be threaded through their comparators directly.
  virtual int select_index_width() const;
  virtual Circuit sgn_rank_select() const;
  virtual Circuit bit_flip_select() const;

 protected:
  // Shared fallback used by the default select implementations.
  Circuit select_by_dispatch(bool flip) const;
};

// Recognized names: "jordan-wigner", "sorted", "buffered", "succinct",
// "succinct-tree", "implicit". fermions fixes the layout size; slack widens
// the admitted weight band where the encoding supports it (see capacity()).
std::unique_ptr<Encoding> make_encoding(const std::string& name, int modes,
                                        int fermions, int slack = 0);
std::vector<std::string> encoding_names();

}  // namespace fermenc

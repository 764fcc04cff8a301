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

#include "fermenc/encoding.hpp"

#include <bit>
#include <stdexcept>

#include "fermenc/fermion_ops.hpp"
#include "fermenc/gadgets.hpp"
#include "enc_internal.hpp"

namespace fermenc {

namespace {

int ceil_log2(uint64_t n) {
  if (n <= 1) return 0;
  return 64 - std::countl_zero(n - 1);
}

}  // namespace

int Encoding::select_index_width() const {
  return std::max(1, ceil_log2(static_cast<uint64_t>(modes())));
}

Circuit Encoding::select_by_dispatch(bool flip) const {
  CircuitBuilder b;
  add_data_registers(b);
  const int dw = data_qubits();
  Wires idx = b.add_register("idx", static_cast<uint32_t>(select_index_width()));
  std::vector<Qubit> map(static_cast<size_t>(dw));
  for (int q = 0; q < dw; ++q) map[static_cast<size_t>(q)] = static_cast<Qubit>(q);
  for (int j = 1; j <= modes(); ++j) {
    Circuit body = flip ? bit_flip_circuit(j) : sgn_rank_circuit(j);
    Qubit f = b.borrow();
    b.begin_scratch();
    g_compare_const(b, idx, static_cast<uint64_t>(j - 1), Rel::eq, f,
                    DepthMode::logdepth);
    b.end_scratch();
    apply_controlled(b, body, {{f, true}}, map);
    b.begin_scratch();
    g_compare_const(b, idx, static_cast<uint64_t>(j - 1), Rel::eq, f,
                    DepthMode::logdepth);
    b.end_scratch();
    b.release(f);
  }
  return b.finalize();
}

Circuit Encoding::sgn_rank_select() const { return select_by_dispatch(false); }

Circuit Encoding::bit_flip_select() const { return select_by_dispatch(true); }

std::unique_ptr<Encoding> make_encoding(const std::string& name, int modes,
                                        int fermions, int slack) {
  if (modes < 1) throw std::invalid_argument("modes must be positive");
  if (fermions < 0 || fermions > modes)
    throw std::invalid_argument("fermions must lie in [0, modes]");
  if (slack < 0) throw std::invalid_argument("slack must be non-negative");
  if (name == "jordan-wigner") return make_jordan_wigner(modes, fermions, slack);
  if (name == "sorted") return make_sorted(modes, fermions, slack);
  if (name == "buffered") return make_buffered(modes, fermions, slack);
  if (name == "succinct") return make_succinct(modes, fermions, slack);
  if (name == "succinct-tree") return make_succinct_tree(modes, fermions, slack);
  if (name == "implicit") return make_implicit(modes, fermions, slack);
  throw std::invalid_argument("unknown encoding: " + name);
}

std::vector<std::string> encoding_names() {
  return {"jordan-wigner", "sorted",        "buffered",
          "succinct",      "succinct-tree", "implicit"};
}

}  // namespace fermenc

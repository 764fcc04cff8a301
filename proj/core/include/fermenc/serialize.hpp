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

#include <stdexcept>
#include <string>

#include "fermenc/circuit.hpp"

namespace fermenc {

// JSON-lines: one header record with the register table, then one record
// per gate. Round-trips exactly.
std::string serialize(const Circuit& c);
Circuit deserialize(const std::string& text);

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what);
  int line;
};

// One gate per line, QASM-like mnemonics. For human inspection only; not
// parsed back.
std::string to_text(const Circuit& c);

}  // namespace fermenc

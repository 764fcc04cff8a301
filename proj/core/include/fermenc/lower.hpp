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

#include "fermenc/circuit.hpp"

namespace fermenc {

// Expands macros recursively and decomposes every multi-controlled or
// multi-target X into gates with at most two controls and one target,
// using a balanced AND tree over fresh ancillas. Ancillas are not reused
// across gates, so independent gates stay depth-parallel after lowering.
Circuit lower(const Circuit& c);

// True when the circuit contains only lowered gate forms.
bool is_lowered(const Circuit& c);

}  // namespace fermenc

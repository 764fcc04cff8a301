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

#include "fermenc/encoding.hpp"

namespace fermenc {

std::unique_ptr<Encoding> make_jordan_wigner(int modes, int fermions, int slack);
std::unique_ptr<Encoding> make_sorted(int modes, int fermions, int slack);
std::unique_ptr<Encoding> make_buffered(int modes, int fermions, int slack);
std::unique_ptr<Encoding> make_succinct(int modes, int fermions, int slack);
std::unique_ptr<Encoding> make_succinct_tree(int modes, int fermions, int slack);
std::unique_ptr<Encoding> make_implicit(int modes, int fermions, int slack);

}  // namespace fermenc

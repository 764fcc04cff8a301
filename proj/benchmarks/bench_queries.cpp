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
#include <memory>

#include <benchmark/benchmark.h>

#include "fermenc/encoding.hpp"
#include "fermenc/lower.hpp"
#include "fermenc/simulate.hpp"

using namespace fermenc;

namespace {

std::unique_ptr<Encoding> sized(const std::string& name, int modes) {
  int f = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(modes))));
  return make_encoding(name, modes, f);
}

void BM_BuildBitFlip(benchmark::State& state, const std::string& name) {
  auto enc = sized(name, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Circuit c = enc->bit_flip_circuit(enc->modes() / 2);
    benchmark::DoNotOptimize(c);
  }
}

void BM_LowerBitFlip(benchmark::State& state, const std::string& name) {
  auto enc = sized(name, static_cast<int>(state.range(0)));
  Circuit c = enc->bit_flip_circuit(enc->modes() / 2);
  for (auto _ : state) {
    Circuit low = lower(c);
    benchmark::DoNotOptimize(low);
  }
}

void BM_SimulateSgnRank(benchmark::State& state, const std::string& name) {
  auto enc = sized(name, static_cast<int>(state.range(0)));
  Circuit c = enc->sgn_rank_circuit(enc->modes());
  FockState b(enc->modes());
  b.set_bit(1, 1);
  auto data = enc->encode(b);
  for (auto _ : state) {
    DataRun r = run_on_data(c, data);
    benchmark::DoNotOptimize(r);
  }
}

void register_all() {
  for (const std::string name : {"jordan-wigner", "sorted", "buffered"}) {
    benchmark::RegisterBenchmark(
        ("build_bit_flip/" + name).c_str(),
        [name](benchmark::State& s) { BM_BuildBitFlip(s, name); })
        ->Arg(16)->Arg(64)->Arg(256);
    benchmark::RegisterBenchmark(
        ("lower_bit_flip/" + name).c_str(),
        [name](benchmark::State& s) { BM_LowerBitFlip(s, name); })
        ->Arg(16)->Arg(64)->Arg(256);
    benchmark::RegisterBenchmark(
        ("simulate_sgn_rank/" + name).c_str(),
        [name](benchmark::State& s) { BM_SimulateSgnRank(s, name); })
        ->Arg(16)->Arg(64);
  }
}

}  // namespace

int main(int argc, char** argv) {
  register_all();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}

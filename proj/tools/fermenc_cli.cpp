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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fermenc/circuit.hpp"
#include "fermenc/encoding.hpp"
#include "fermenc/fermion_ops.hpp"
#include "fermenc/fock.hpp"
#include "fermenc/lower.hpp"
#include "fermenc/serialize.hpp"
#include "fermenc/simulate.hpp"

namespace {

using namespace fermenc;
using nlohmann::json;

constexpr uint64_t kDefaultSeed = 20260823;
constexpr uint64_t kExhaustiveLimit = 1ull << 20;

int thread_budget() {
  const char* env = std::getenv("FERMENC_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n < 1 ? 1 : n;
}

// Runs fn(i) for i in [0, n) on up to thread_budget() workers.
void parallel_for(uint64_t n, const std::function<void(uint64_t)>& fn) {
  int workers = thread_budget();
  if (workers <= 1 || n <= 1) {
    for (uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<uint64_t> next{0};
  auto drain = [&] {
    for (;;) {
      uint64_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
}

struct Metrics {
  uint32_t data_qubits = 0;
  uint32_t ancilla_qubits = 0;
  GateCounts counts;
  uint64_t depth = 0;
  double build_ms = 0.0;
};

Metrics measure(const Circuit& macro_level) {
  auto t0 = std::chrono::steady_clock::now();
  Circuit low = lower(macro_level);
  auto t1 = std::chrono::steady_clock::now();
  Metrics m;
  m.data_qubits = low.data_width();
  m.ancilla_qubits = low.ancilla_width();
  m.counts = low.gate_counts();
  m.depth = low.depth();
  m.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return m;
}

std::string kinds_cell(const GateCounts& c) {
  std::string out;
  for (const auto& [k, n] : c.by_kind) {
    if (!out.empty()) out += ';';
    out += k + ":" + std::to_string(n);
  }
  return out;
}

json metrics_json(const Metrics& m) {
  json by = json::object();
  for (const auto& [k, n] : m.counts.by_kind) by[k] = n;
  return json{{"data_qubits", m.data_qubits},
              {"ancilla_qubits", m.ancilla_qubits},
              {"gates", m.counts.total},
              {"gates_1q2q", m.counts.total_1q2q},
              {"toffoli", m.counts.toffoli},
              {"weighted_gates", m.counts.weighted_total},
              {"depth", m.depth},
              {"by_kind", by}};
}

void print_metrics_text(std::ostream& os, const Metrics& m) {
  os << "data qubits:    " << m.data_qubits << "\n"
     << "ancilla qubits: " << m.ancilla_qubits << "\n"
     << "gates:          " << m.counts.total << " (1q2q " << m.counts.total_1q2q
     << ", toffoli " << m.counts.toffoli << ", weighted "
     << m.counts.weighted_total << ")\n"
     << "depth:          " << m.depth << "\n";
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// The promises are weight bands, so probing one representative per weight
// recovers the exact admitted range.
std::pair<int, int> promise_band(const Encoding& enc) {
  int m = enc.modes();
  int lo = -1, hi = -1;
  for (int w = 0; w <= m; ++w) {
    FockState b(m);
    for (int j = 1; j <= w; ++j) b.set_bit(j, 1);
    if (enc.can_encode(b)) {
      if (lo < 0) lo = w;
      hi = w;
    }
  }
  if (lo < 0) throw std::runtime_error("encoding admits no states");
  return {lo, hi};
}

uint64_t band_state_count(int modes, std::pair<int, int> band) {
  uint64_t n = 0;
  for (int w = band.first; w <= band.second; ++w) n += binomial_u64(modes, w);
  return n;
}

std::vector<FockState> band_states(int modes, std::pair<int, int> band) {
  std::vector<FockState> out;
  for (int w = band.first; w <= band.second; ++w) {
    auto part = enumerate_capacity_states(modes, Capacity{w, 0});
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

struct CommonOpts {
  std::string encoding = "sorted";
  int modes = 8;
  int fermions = 2;
  int slack = 0;
  std::string format = "text";
  std::string out;
};

std::ostream& open_out(const CommonOpts& c, std::ofstream& file) {
  if (c.out.empty()) return std::cout;
  file.open(c.out);
  if (!file) throw std::runtime_error("cannot open " + c.out);
  return file;
}

// ---------------------------------------------------------------- synth --

struct SynthOpts : CommonOpts {
  std::string op = "sgn-rank";
  int index = 1;
  std::string majoranas = "1,4";
  double theta = 0.5;
  bool keep_macros = false;
};

Circuit build_op(const Encoding& enc, const SynthOpts& o, QuarterPhase* phase) {
  if (o.op == "sgn-rank") return enc.sgn_rank_circuit(o.index);
  if (o.op == "bit-flip") return enc.bit_flip_circuit(o.index);
  if (o.op == "majorana") {
    auto u = compile_majorana(enc, o.index);
    if (phase) *phase = u.phase;
    return u.circuit;
  }
  if (o.op == "rotation") {
    RotationSpec spec;
    for (int v : parse_int_list(o.majoranas)) spec.generator.indices.push_back(v);
    spec.theta = o.theta;
    return compile_rotation(enc, spec);
  }
  if (o.op == "select") return compile_select(enc, SelectOp::bit_flip);
  if (o.op == "select-sgn-rank") return compile_select(enc, SelectOp::sgn_rank);
  if (o.op == "select-bit-flip") return compile_select(enc, SelectOp::bit_flip);
  throw CLI::ValidationError("--op", "unknown operation " + o.op);
}

int cmd_synth(const SynthOpts& o) {
  auto enc = make_encoding(o.encoding, o.modes, o.fermions, o.slack);
  QuarterPhase phase;
  Circuit c = build_op(*enc, o, &phase);
  Metrics m = measure(c);
  Circuit emitted = o.keep_macros ? c : lower(c);

  std::ofstream file;
  std::ostream& os = open_out(static_cast<const CommonOpts&>(o), file);
  os << serialize(emitted);

  if (o.format == "json") {
    json j = metrics_json(m);
    j["encoding"] = enc->name();
    j["modes"] = o.modes;
    j["fermions"] = o.fermions;
    j["op"] = o.op;
    j["index"] = o.index;
    if (phase.exponent() != 0) j["scalar_phase_i_exp"] = phase.exponent();
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << enc->name() << " " << o.op << " (modes " << o.modes
              << ", fermions " << o.fermions << ")\n";
    print_metrics_text(std::cerr, m);
    if (phase.exponent() != 0)
      std::cerr << "scalar phase:   i^" << phase.exponent() << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- verify --

struct VerifyOpts : CommonOpts {
  uint64_t samples = 0;  // 0: exhaustive
  uint64_t seed = kDefaultSeed;
};

struct Failure {
  uint64_t state_idx;
  int j;
  std::string op;
  std::string detail;
  bool operator<(const Failure& o) const {
    return std::tie(state_idx, j, op) < std::tie(o.state_idx, o.j, o.op);
  }
};

int cmd_verify(const VerifyOpts& o) {
  auto enc = make_encoding(o.encoding, o.modes, o.fermions, o.slack);
  auto band = promise_band(*enc);
  uint64_t count = band_state_count(o.modes, band);
  if (o.samples == 0 && count > kExhaustiveLimit) {
    std::cerr << "promise holds " << count << " states, above the exhaustive "
              << "limit " << kExhaustiveLimit << "; rerun with --samples N\n";
    return 2;
  }
  std::vector<FockState> states = band_states(o.modes, band);
  if (o.samples > 0 && o.samples < states.size()) {
    std::cout << "sampling " << o.samples << " of " << states.size()
              << " states, seed " << o.seed << "\n";
    std::mt19937_64 rng(o.seed);
    std::shuffle(states.begin(), states.end(), rng);
    states.resize(o.samples);
  }

  std::vector<Circuit> c_sgn, c_flip;
  for (int j = 1; j <= o.modes; ++j) {
    c_sgn.push_back(enc->sgn_rank_circuit(j));
    c_flip.push_back(enc->bit_flip_circuit(j));
  }

  std::mutex mu;
  std::optional<Failure> first;
  auto report = [&](Failure f) {
    std::lock_guard<std::mutex> lock(mu);
    if (!first || f < *first) first = std::move(f);
  };

  parallel_for(states.size(), [&](uint64_t si) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (first) return;
    }
    const FockState& b = states[si];
    auto data = enc->encode(b);
    for (int j = 1; j <= o.modes; ++j) {
      auto run = run_on_data(c_sgn[static_cast<size_t>(j - 1)], data);
      int want = sgn_rank_oracle(j, b);
      int got_exp = run.phase.exponent();
      if (run.data != data || !run.ancillas_clean || (got_exp % 2) != 0 ||
          (got_exp == 0 ? 1 : -1) != want) {
        std::ostringstream d;
        d << "sgn-rank expected " << (want > 0 ? "+1" : "-1") << ", got i^"
          << got_exp << (run.data != data ? ", data moved" : "")
          << (!run.ancillas_clean ? ", dirty ancilla" : "");
        report({si, j, "sgn-rank", d.str()});
        return;
      }
      FockState flipped = bit_flip_oracle(j, b);
      if (!enc->can_encode(flipped)) continue;
      auto frun = run_on_data(c_flip[static_cast<size_t>(j - 1)], data);
      bool ok = frun.ancillas_clean && frun.phase.exponent() == 0;
      if (ok) {
        try {
          ok = enc->decode(frun.data) == flipped;
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok) {
        std::ostringstream d;
        d << "bit-flip expected " << flipped.str() << ", got phase i^"
          << frun.phase.exponent()
          << (!frun.ancillas_clean ? ", dirty ancilla" : "");
        report({si, j, "bit-flip", d.str()});
        return;
      }
    }
  });

  if (first) {
    const FockState& b = states[first->state_idx];
    std::cout << "FAIL " << enc->name() << " modes=" << o.modes
              << " fermions=" << o.fermions << " j=" << first->j << " state="
              << b.str() << ": " << first->detail << "\n";
    return 1;
  }
  std::cout << "OK " << enc->name() << " modes=" << o.modes << " fermions="
            << o.fermions << ": " << states.size() << " states x " << o.modes
            << " indices, sgn-rank and bit-flip match the oracle\n";
  return 0;
}

// ---------------------------------------------------------------- bench --

struct BenchOpts : CommonOpts {
  std::string encodings = "jordan-wigner,sorted,buffered,succinct,succinct-tree";
  std::string modes_list = "16,64";
  std::string fermions_rule = "sqrt";
  std::string ops = "sgn-rank,bit-flip";
};

struct BenchCell {
  std::string encoding;
  int modes;
  int fermions;
  int slack;
  std::string op;
  std::string index = "max";
  bool ok = false;
  std::string error;
  Metrics m;
  int bound = 0;
};

void run_cell(BenchCell& cell) {
  try {
    auto enc = make_encoding(cell.encoding, cell.modes, cell.fermions, cell.slack);
    auto t0 = std::chrono::steady_clock::now();
    Circuit c;
    if (cell.op == "sgn-rank") c = enc->sgn_rank_circuit(cell.modes);
    else if (cell.op == "bit-flip") c = enc->bit_flip_circuit(cell.modes);
    else if (cell.op == "select") c = compile_select(*enc, SelectOp::bit_flip);
    else if (cell.op == "select-sgn-rank") c = compile_select(*enc, SelectOp::sgn_rank);
    else throw std::runtime_error("unknown bench op " + cell.op);
    cell.m = measure(c);
    auto t1 = std::chrono::steady_clock::now();
    cell.m.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    cell.bound = info_bound(cell.modes, cell.fermions);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
}

int cmd_bench(const BenchOpts& o) {
  std::vector<std::string> encs = parse_name_list(o.encodings);
  if (std::find(encs.begin(), encs.end(), "jordan-wigner") == encs.end())
    encs.insert(encs.begin(), "jordan-wigner");
  std::vector<int> modes = parse_int_list(o.modes_list);
  std::vector<std::string> ops = parse_name_list(o.ops);

  std::vector<BenchCell> cells;
  for (const auto& e : encs)
    for (int m : modes) {
      int f = o.fermions_rule == "sqrt"
                  ? static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))))
                  : std::stoi(o.fermions_rule);
      for (const auto& op : ops)
        cells.push_back(BenchCell{e, m, f, o.slack, op});
    }

  parallel_for(cells.size(), [&](uint64_t i) { run_cell(cells[i]); });

  std::ofstream file;
  std::ostream& os = open_out(static_cast<const CommonOpts&>(o), file);
  os << "# fermenc-bench v1\n";
  os << "encoding,modes,fermions,slack,op,index,data_qubits,ancilla_qubits,"
        "gates,gates_1q2q,toffoli,weighted_gates,depth,info_bound,by_kind,"
        "build_ms,status\n";
  for (const auto& c : cells) {
    os << c.encoding << ',' << c.modes << ',' << c.fermions << ',' << c.slack
       << ',' << c.op << ',' << c.index << ',';
    if (c.ok) {
      os << c.m.data_qubits << ',' << c.m.ancilla_qubits << ','
         << c.m.counts.total << ',' << c.m.counts.total_1q2q << ','
         << c.m.counts.toffoli << ',' << c.m.counts.weighted_total << ','
         << c.m.depth << ',' << c.bound << ',' << kinds_cell(c.m.counts) << ','
         << c.m.build_ms << ",ok\n";
    } else {
      std::string msg = c.error;
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      os << ",,,,,,,,," << "0,error:" << msg << "\n";
    }
  }
  return 0;
}

// ------------------------------------------------------------- estimate --

struct EstimateOpts : CommonOpts {
  double lambda_t = 100.0;
  double epsilon = 1e-3;
};

int cmd_estimate(const EstimateOpts& o) {
  if (o.epsilon <= 0) throw CLI::ValidationError("--epsilon", "must be positive");
  double raw = (o.lambda_t * o.lambda_t) / o.epsilon;
  uint64_t rotations = static_cast<uint64_t>(std::ceil(raw));

  int slack = std::max(1, o.slack);
  auto enc = make_encoding(o.encoding, o.modes, o.fermions, slack);
  RotationSpec spec;
  spec.generator.indices = {1, 4};  // hopping between the first two modes
  spec.theta = 0.5;
  Metrics m = measure(compile_rotation(*enc, spec));

  if (o.format == "json") {
    json j = metrics_json(m);
    j["encoding"] = enc->name();
    j["modes"] = o.modes;
    j["fermions"] = o.fermions;
    j["lambda_t"] = o.lambda_t;
    j["epsilon"] = o.epsilon;
    j["rotations"] = rotations;
    j["total_weighted_gates"] = static_cast<double>(rotations) *
                                static_cast<double>(m.counts.weighted_total);
    j["total_depth"] = static_cast<double>(rotations) *
                       static_cast<double>(m.depth);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "encoding:            " << enc->name() << " (modes " << o.modes
              << ", fermions " << o.fermions << ")\n"
              << "rotations:           " << rotations << "  (ceil((lambda*t)^2/eps))\n"
              << "per-rotation gates:  " << m.counts.weighted_total
              << " weighted, depth " << m.depth << "\n"
              << "total gates:         "
              << static_cast<double>(rotations) * static_cast<double>(m.counts.weighted_total)
              << " weighted\n"
              << "total depth:         "
              << static_cast<double>(rotations) * static_cast<double>(m.depth) << "\n"
              << "qubits:              " << m.data_qubits << " data + "
              << m.ancilla_qubits << " ancilla\n";
  }
  return 0;
}

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--encoding", o.encoding, "encoding name")
      ->check(CLI::IsMember(encoding_names()));
  app->add_option("--modes", o.modes, "number of fermionic modes M")->required();
  app->add_option("--fermions", o.fermions, "occupancy parameter F")->required();
  app->add_option("--slack", o.slack, "admitted weight slack k");
  app->add_option("--format", o.format, "summary format")
      ->check(CLI::IsMember({"text", "json"}));
  app->add_option("--out", o.out, "write primary output to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circuit synthesis for second-quantized fermionic encodings"};
  app.require_subcommand(1);

  SynthOpts synth_o;
  auto* synth = app.add_subcommand("synth", "emit a circuit for one operator");
  add_common(synth, synth_o);
  synth->add_option("--op", synth_o.op,
                    "sgn-rank | bit-flip | majorana | rotation | select");
  synth->add_option("--index", synth_o.index,
                    "mode index j (sgn-rank, bit-flip) or Majorana index mu");
  synth->add_option("--majoranas", synth_o.majoranas,
                    "rotation generator as comma-joined Majorana indices");
  synth->add_option("--theta", synth_o.theta, "rotation angle");
  synth->add_flag("--macros", synth_o.keep_macros,
                  "emit macro-level gates instead of the lowered circuit");

  VerifyOpts verify_o;
  auto* verify = app.add_subcommand(
      "verify", "simulate sgn-rank and bit-flip against the oracle");
  add_common(verify, verify_o);
  verify->add_option("--samples", verify_o.samples,
                     "random state sample size (0: exhaustive)");
  verify->add_option("--seed", verify_o.seed, "sampling seed");

  BenchOpts bench_o;
  auto* bench = app.add_subcommand("bench", "resource table over a size sweep");
  bench->add_option("--encoding", bench_o.encodings, "comma-joined encoding names");
  bench->add_option("--modes", bench_o.modes_list, "comma-joined mode counts")
      ->required();
  bench->add_option("--fermions", bench_o.fermions_rule,
                    "occupancy rule: sqrt or a fixed integer");
  bench->add_option("--slack", bench_o.slack, "admitted weight slack k");
  bench->add_option("--op", bench_o.ops, "comma-joined op names");
  bench->add_option("--out", bench_o.out, "CSV output path (default stdout)");

  EstimateOpts est_o;
  auto* est = app.add_subcommand(
      "estimate", "total cost of a Trotter run at target error");
  add_common(est, est_o);
  est->add_option("--lambda-t", est_o.lambda_t, "evolution strength lambda*t");
  est->add_option("--epsilon", est_o.epsilon, "target error");

  try {
    app.parse(argc, argv);
    if (*synth) return cmd_synth(synth_o);
    if (*verify) return cmd_verify(verify_o);
    if (*bench) return cmd_bench(bench_o);
    if (*est) return cmd_estimate(est_o);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

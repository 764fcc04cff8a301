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

#include "fermenc/serialize.hpp"

#include <sstream>

#include <json.hpp>

namespace fermenc {
namespace {

using nlohmann::json;

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "x";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Swap: return "swap";
    case GateKind::Cz: return "cz";
    case GateKind::Mcx: return "mcx";
    case GateKind::Macro: return "macro";
  }
  return "?";
}

GateKind kind_from_name(const std::string& s) {
  if (s == "x") return GateKind::X;
  if (s == "z") return GateKind::Z;
  if (s == "s") return GateKind::S;
  if (s == "swap") return GateKind::Swap;
  if (s == "cz") return GateKind::Cz;
  if (s == "mcx") return GateKind::Mcx;
  if (s == "macro") return GateKind::Macro;
  throw std::invalid_argument("unknown gate kind: " + s);
}

}  // namespace

ParseError::ParseError(int line_no, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
      line(line_no) {}

std::string serialize(const Circuit& c) {
  std::ostringstream out;
  json hdr;
  hdr["type"] = "circuit";
  hdr["version"] = 1;
  hdr["registers"] = json::array();
  for (const auto& r : c.registers())
    hdr["registers"].push_back({{"name", r.name}, {"width", r.width}, {"ancilla", r.ancilla}});
  out << hdr.dump() << '\n';

  for (const auto& g : c.gates()) {
    json rec;
    rec["kind"] = kind_name(g.kind);
    rec["t"] = g.targets;
    if (!g.controls.empty()) {
      json cs = json::array();
      for (const auto& ctl : g.controls)
        cs.push_back({ctl.qubit, ctl.closed ? 1 : 0});
      rec["c"] = cs;
    }
    if (g.scratch) rec["scratch"] = true;
    if (g.kind == GateKind::Macro) {
      rec["name"] = g.name;
      rec["params"] = g.params;
    }
    out << rec.dump() << '\n';
  }
  return out.str();
}

Circuit deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  Circuit c;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    try {
      if (!have_header) {
        if (rec.value("type", "") != "circuit")
          throw std::invalid_argument("missing circuit header");
        for (const auto& r : rec.at("registers"))
          c.add_register(r.at("name").get<std::string>(), r.at("width").get<uint32_t>(),
                         r.value("ancilla", false));
        have_header = true;
        continue;
      }
      Gate g;
      g.kind = kind_from_name(rec.at("kind").get<std::string>());
      g.targets = rec.at("t").get<std::vector<Qubit>>();
      if (rec.contains("c"))
        for (const auto& ctl : rec["c"])
          g.controls.push_back({ctl.at(0).get<Qubit>(), ctl.at(1).get<int>() != 0});
      g.scratch = rec.value("scratch", false);
      if (g.kind == GateKind::Macro) {
        g.name = rec.at("name").get<std::string>();
        g.params = rec.at("params").get<std::vector<int64_t>>();
      }
      for (Qubit q : g.targets)
        if (q >= c.width()) throw std::invalid_argument("target out of range");
      for (const auto& ctl : g.controls)
        if (ctl.qubit >= c.width()) throw std::invalid_argument("control out of range");
      c.append(std::move(g));
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, "empty input, no circuit header");
  return c;
}

std::string to_text(const Circuit& c) {
  std::ostringstream out;
  for (const auto& r : c.registers())
    out << "reg " << r.name << '[' << r.width << ']' << (r.ancilla ? " anc" : "") << '\n';
  for (const auto& g : c.gates()) {
    out << kind_name(g.kind);
    if (g.kind == GateKind::Macro) out << ':' << g.name;
    for (const auto& ctl : g.controls)
      out << ' ' << (ctl.closed ? '+' : '-') << 'q' << ctl.qubit;
    for (Qubit t : g.targets) out << " q" << t;
    if (!g.params.empty()) {
      out << " ;";
      for (int64_t p : g.params) out << ' ' << p;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace fermenc

// Copyright 2026 The matnc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matnc/circuit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <unordered_map>

#include "matnc/error.h"
#include "matnc/rng.h"

namespace matnc {
namespace {

using cd = std::complex<double>;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

bool kind_from_name(std::string_view name, GateKind& kind) {
  static const std::pair<std::string_view, GateKind> kNames[] = {
      {"x_1_2", GateKind::kSqrtX}, {"y_1_2", GateKind::kSqrtY},
      {"hz_1_2", GateKind::kSqrtW}, {"fs", GateKind::kFsim},
      {"h", GateKind::kH},          {"t", GateKind::kT},
      {"cz", GateKind::kCz}};
  for (const auto& [n, k] : kNames) {
    if (n == name) {
      kind = k;
      return true;
    }
  }
  return false;
}

// Checks qubit ranges and per-cycle collisions; `line_of` maps a gate
// position to its source line for diagnostics (empty when not parsing).
void check_gates(const Circuit& c, const std::vector<std::size_t>& line_of) {
  auto where = [&](std::size_t g) {
    return line_of.empty() ? "gate " + std::to_string(g) + ": " : at_line(line_of[g]);
  };
  std::unordered_map<int, std::vector<bool>> used;
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    if (gate.cycle < 0) throw InvalidArgument(where(g) + "negative cycle");
    for (int s = 0; s < gate.arity(); ++s) {
      const int q = gate.qubits[s];
      if (q < 0 || q >= c.n_qubits) {
        throw InvalidArgument(where(g) + "qubit " + std::to_string(q) +
                              " out of range for " + std::to_string(c.n_qubits) +
                              " qubits");
      }
    }
    if (gate.arity() == 2 && gate.qubits[0] == gate.qubits[1]) {
      throw InvalidArgument(where(g) + "two-qubit gate on a single qubit " +
                            std::to_string(gate.qubits[0]));
    }
    auto& mask = used[gate.cycle];
    mask.resize(static_cast<std::size_t>(c.n_qubits), false);
    for (int s = 0; s < gate.arity(); ++s) {
      const int q = gate.qubits[s];
      if (mask[q]) {
        throw InvalidArgument(where(g) + "qubit " + std::to_string(q) +
                              " used twice in cycle " + std::to_string(gate.cycle));
      }
      mask[q] = true;
    }
  }
}

}  // namespace

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kSqrtX: return "x_1_2";
    case GateKind::kSqrtY: return "y_1_2";
    case GateKind::kSqrtW: return "hz_1_2";
    case GateKind::kFsim: return "fs";
    case GateKind::kH: return "h";
    case GateKind::kT: return "t";
    case GateKind::kCz: return "cz";
  }
  return "?";
}

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_header = false;
  std::vector<std::size_t> line_of;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;

    if (!have_header) {
      if (tok.size() != 1 || !parse_number(tok[0], c.n_qubits) || c.n_qubits <= 0) {
        throw ParseError(at_line(line_no) + "expected a positive qubit count");
      }
      have_header = true;
      continue;
    }

    Gate g;
    if (tok.size() < 3) throw ParseError(at_line(line_no) + "too few fields");
    if (!parse_number(tok[0], g.cycle) || g.cycle < 0) {
      throw ParseError(at_line(line_no) + "bad cycle '" + std::string(tok[0]) + "'");
    }
    if (!kind_from_name(tok[1], g.kind)) {
      throw ParseError(at_line(line_no) + "unknown gate '" + std::string(tok[1]) + "'");
    }
    const std::size_t expected =
        g.kind == GateKind::kFsim ? 6 : (g.kind == GateKind::kCz ? 4 : 3);
    if (tok.size() != expected) {
      throw ParseError(at_line(line_no) + "gate '" + std::string(tok[1]) + "' takes " +
                       std::to_string(expected) + " fields, got " +
                       std::to_string(tok.size()));
    }
    for (int s = 0; s < g.arity(); ++s) {
      if (!parse_number(tok[2 + s], g.qubits[s])) {
        throw ParseError(at_line(line_no) + "bad qubit '" + std::string(tok[2 + s]) + "'");
      }
    }
    if (g.kind == GateKind::kFsim &&
        (!parse_number(tok[4], g.theta) || !parse_number(tok[5], g.phi))) {
      throw ParseError(at_line(line_no) + "bad fsim angle");
    }
    c.gates.push_back(g);
    line_of.push_back(line_no);
  }
  if (!have_header) throw ParseError("line 1: missing qubit count");

  try {
    check_gates(c, line_of);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  std::stable_sort(c.gates.begin(), c.gates.end(),
                   [](const Gate& a, const Gate& b) { return a.cycle < b.cycle; });
  return c;
}

std::string format_circuit(const Circuit& circuit) {
  std::string out = std::to_string(circuit.n_qubits) + "\n";
  char buf[128];
  for (const Gate& g : circuit.gates) {
    out += std::to_string(g.cycle) + " " + std::string(gate_name(g.kind)) + " " +
           std::to_string(g.qubits[0]);
    if (g.arity() == 2) out += " " + std::to_string(g.qubits[1]);
    if (g.kind == GateKind::kFsim) {
      std::snprintf(buf, sizeof buf, " %.17g %.17g", g.theta, g.phi);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void validate_circuit(const Circuit& circuit) {
  if (circuit.n_qubits <= 0) throw InvalidArgument("circuit needs at least one qubit");
  check_gates(circuit, {});
  for (std::size_t g = 1; g < circuit.gates.size(); ++g) {
    if (circuit.gates[g].cycle < circuit.gates[g - 1].cycle) {
      throw InvalidArgument("gates are not sorted by cycle");
    }
  }
}

Tensor gate_matrix(const Gate& gate) {
  const double r2 = std::numbers::sqrt2 / 2.0;
  const cd i(0.0, 1.0);
  std::vector<cd> m;
  switch (gate.kind) {
    case GateKind::kSqrtX:
      m = {0.5 * (1.0 + i), 0.5 * (1.0 - i), 0.5 * (1.0 - i), 0.5 * (1.0 + i)};
      break;
    case GateKind::kSqrtY:
      m = {0.5 * (1.0 + i), 0.5 * (-1.0 - i), 0.5 * (1.0 + i), 0.5 * (1.0 + i)};
      break;
    case GateKind::kSqrtW: {
      const cd sqrt_i = std::polar(1.0, std::numbers::pi / 4);
      const cd sqrt_minus_i = std::polar(1.0, -std::numbers::pi / 4);
      m = {r2, -r2 * sqrt_i, r2 * sqrt_minus_i, r2};
      break;
    }
    case GateKind::kH:
      m = {r2, r2, r2, -r2};
      break;
    case GateKind::kT:
      m = {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)};
      break;
    case GateKind::kCz:
      m.assign(16, 0.0);
      m[0] = m[5] = m[10] = 1.0;
      m[15] = -1.0;
      break;
    case GateKind::kFsim: {
      const double c = std::cos(gate.theta), s = std::sin(gate.theta);
      m.assign(16, 0.0);
      m[0] = 1.0;
      m[5] = c;
      m[6] = -i * s;
      m[9] = -i * s;
      m[10] = c;
      m[15] = std::polar(1.0, -gate.phi);
      break;
    }
  }
  std::vector<Index> idx;
  for (int r = 0; r < 2 * gate.arity(); ++r) idx.push_back(Index{r, 2});
  return Tensor(std::move(idx), std::move(m));
}

std::vector<int> TensorNetwork::outputs_on(int t) const {
  std::vector<int> qs;
  for (int q = 0; q < n_qubits; ++q) {
    if (output_tensor[q] == t) qs.push_back(q);
  }
  return qs;
}

std::uint64_t TensorNetwork::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(n_qubits));
  mix(tensors.size());
  for (const Tensor& t : tensors) {
    mix(t.rank());
    for (const Index& i : t.indices()) {
      mix(static_cast<std::uint64_t>(i.id));
      mix(static_cast<std::uint64_t>(i.dim));
      mix(static_cast<std::uint64_t>(i.tag));
      mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(i.qubit)));
    }
  }
  return h;
}

TensorNetwork TensorNetwork::from_tensors(std::vector<Tensor> tensors) {
  TensorNetwork tn;
  IndexId max_id = -1;
  for (const Tensor& t : tensors) {
    for (const Index& i : t.indices()) max_id = std::max(max_id, i.id);
  }
  const std::size_t n_ids = static_cast<std::size_t>(max_id + 1);
  tn.index_dims.assign(n_ids, 0);
  std::vector<int> count(n_ids, 0);
  std::vector<Index> outputs;
  std::vector<int> output_owner;
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    for (const Index& i : tensors[t].indices()) {
      if (i.id < 0) throw InvalidArgument("negative index id");
      if (count[i.id]++ > 0 && tn.index_dims[i.id] != i.dim) {
        throw InvalidArgument("index " + std::to_string(i.id) + " has inconsistent dims");
      }
      tn.index_dims[i.id] = i.dim;
      if (i.tag == IndexTag::kOutput) {
        outputs.push_back(i);
        output_owner.push_back(static_cast<int>(t));
      }
    }
  }
  for (std::size_t id = 0; id < n_ids; ++id) {
    if (count[id] == 0) {
      throw InvalidArgument("index ids are not dense: " + std::to_string(id) + " unused");
    }
  }
  tn.n_qubits = static_cast<int>(outputs.size());
  tn.open_outputs.assign(outputs.size(), Index{});
  tn.output_tensor.assign(outputs.size(), -1);
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    const int q = outputs[o].qubit;
    if (q < 0 || q >= tn.n_qubits || tn.output_tensor[q] != -1) {
      throw InvalidArgument("output qubits must be 0..n-1, each exactly once");
    }
    if (count[outputs[o].id] != 1) {
      throw InvalidArgument("output index " + std::to_string(outputs[o].id) +
                            " must appear on exactly one tensor");
    }
    tn.open_outputs[q] = outputs[o];
    tn.output_tensor[q] = output_owner[o];
  }
  for (const Tensor& t : tensors) {
    for (const Index& i : t.indices()) {
      if (i.tag != IndexTag::kOutput && count[i.id] != 2) {
        throw InvalidArgument("index " + std::to_string(i.id) +
                              " must appear on exactly two tensors");
      }
    }
  }
  tn.bright.assign(tensors.size(), false);
  for (int owner : tn.output_tensor) tn.bright[owner] = true;
  tn.tensors = std::move(tensors);
  return tn;
}

TensorNetwork build_tensor_network(const Circuit& circuit) {
  validate_circuit(circuit);
  const int n = circuit.n_qubits;

  struct Pending {
    std::vector<Index> indices;
    std::vector<cd> data;
  };
  std::vector<Pending> pending;
  // Location (tensor, slot) of each index id's most recent appearance.
  std::vector<std::pair<int, int>> last_seen;
  IndexId next_id = 0;
  std::vector<IndexId> wire(n);

  for (int q = 0; q < n; ++q) {
    const Index in{next_id++, 2, IndexTag::kInput, q};
    pending.push_back({{in}, {1.0, 0.0}});
    last_seen.push_back({q, 0});
    wire[q] = in.id;
  }

  auto incoming = [&](int q) {
    const auto [t, slot] = last_seen[wire[q]];
    return pending[t].indices[slot];
  };

  for (const Gate& g : circuit.gates) {
    const Tensor u = gate_matrix(g);
    const int t = static_cast<int>(pending.size());
    std::vector<Index> idx;
    for (int s = 0; s < g.arity(); ++s) {
      idx.push_back(Index{next_id++, 2, IndexTag::kInternal, -1});
      last_seen.push_back({t, s});
    }
    for (int s = 0; s < g.arity(); ++s) {
      const Index in = incoming(g.qubits[s]);
      last_seen[in.id] = {t, g.arity() + s};
      idx.push_back(in);
    }
    for (int s = 0; s < g.arity(); ++s) wire[g.qubits[s]] = idx[s].id;
    pending.push_back({std::move(idx), {u.data().begin(), u.data().end()}});
  }

  TensorNetwork tn;
  tn.n_qubits = n;
  tn.open_outputs.resize(n);
  tn.output_tensor.resize(n);
  for (int q = 0; q < n; ++q) {
    const auto [t, slot] = last_seen[wire[q]];
    Index& out = pending[t].indices[slot];
    out.tag = IndexTag::kOutput;
    out.qubit = q;
    tn.open_outputs[q] = out;
    tn.output_tensor[q] = t;
  }
  tn.index_dims.assign(static_cast<std::size_t>(next_id), 2);
  tn.bright.assign(pending.size(), false);
  for (int t : tn.output_tensor) tn.bright[t] = true;
  tn.tensors.reserve(pending.size());
  for (auto& p : pending) tn.tensors.emplace_back(std::move(p.indices), std::move(p.data));
  return tn;
}

Circuit random_circuit(int n_qubits, int cols, int depth, std::uint64_t seed,
                       bool final_single_layer) {
  if (n_qubits <= 0 || cols <= 0 || depth < 0) {
    throw InvalidArgument("random_circuit needs n_qubits > 0, cols > 0, depth >= 0");
  }
  Rng rng(seed);
  Circuit c;
  c.n_qubits = n_qubits;
  const GateKind singles[3] = {GateKind::kSqrtX, GateKind::kSqrtY, GateKind::kSqrtW};
  std::vector<int> previous(n_qubits, -1);

  auto single_layer = [&](int cycle) {
    for (int q = 0; q < n_qubits; ++q) {
      int pick = static_cast<int>(rng.below(3));
      if (previous[q] >= 0) {
        pick = static_cast<int>(rng.below(2));
        if (pick >= previous[q]) ++pick;
      }
      previous[q] = pick;
      Gate g;
      g.kind = singles[pick];
      g.qubits = {q, -1};
      g.cycle = cycle;
      c.gates.push_back(g);
    }
  };

  static constexpr char kPatterns[] = "ABCDCDAB";
  for (int layer = 0; layer < depth; ++layer) {
    single_layer(2 * layer);
    const char pattern = kPatterns[layer % 8];
    for (int q = 0; q < n_qubits; ++q) {
      const int r = q / cols, col = q % cols;
      int partner = -1;
      if ((pattern == 'A' && col % 2 == 0) || (pattern == 'B' && col % 2 == 1)) {
        if (col + 1 < cols) partner = q + 1;
      } else if ((pattern == 'C' && r % 2 == 0) || (pattern == 'D' && r % 2 == 1)) {
        partner = q + cols;
      }
      if (partner < 0 || partner >= n_qubits) continue;
      Gate g;
      g.kind = GateKind::kFsim;
      g.qubits = {q, partner};
      g.theta = std::numbers::pi / 2;
      g.phi = std::numbers::pi / 6;
      g.cycle = 2 * layer + 1;
      c.gates.push_back(g);
    }
  }
  if (final_single_layer) single_layer(2 * depth);
  return c;
}

}  // namespace matnc

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

#include "matnc/oracle.h"

#include <algorithm>
#include <string>

#include "matnc/error.h"
#include "matnc/rng.h"

namespace matnc {
namespace {

using cd = std::complex<double>;

void apply_one(std::vector<cd>& psi, int n, int q, std::span<const cd> m) {
  const std::size_t stride = std::size_t{1} << (n - 1 - q);
  for (std::size_t base = 0; base < psi.size(); ++base) {
    if (base & stride) continue;
    const cd a0 = psi[base], a1 = psi[base | stride];
    psi[base] = m[0] * a0 + m[1] * a1;
    psi[base | stride] = m[2] * a0 + m[3] * a1;
  }
}

void apply_two(std::vector<cd>& psi, int n, int q0, int q1, std::span<const cd> m) {
  const std::size_t s0 = std::size_t{1} << (n - 1 - q0);
  const std::size_t s1 = std::size_t{1} << (n - 1 - q1);
  for (std::size_t base = 0; base < psi.size(); ++base) {
    if ((base & s0) || (base & s1)) continue;
    const std::size_t idx[4] = {base, base | s1, base | s0, base | s0 | s1};
    cd in[4];
    for (int j = 0; j < 4; ++j) in[j] = psi[idx[j]];
    for (int r = 0; r < 4; ++r) {
      cd acc = 0;
      for (int c = 0; c < 4; ++c) acc += m[4 * r + c] * in[c];
      psi[idx[r]] = acc;
    }
  }
}

}  // namespace

cd StateVector::amplitude(const Bitstring& b) const {
  if (b.size() != n_qubits) {
    throw MismatchError("bitstring has length " + std::to_string(b.size()) + ", expected " +
                        std::to_string(n_qubits));
  }
  return amplitudes[b.to_index()];
}

double StateVector::norm_squared() const {
  double s = 0;
  for (const cd& a : amplitudes) s += std::norm(a);
  return s;
}

StateVector statevector(const Circuit& circuit, int max_qubits) {
  const int n = circuit.n_qubits;
  if (n < 1 || n > max_qubits) {
    throw InvalidArgument("statevector supports 1.." + std::to_string(max_qubits) +
                          " qubits, got " + std::to_string(n));
  }
  validate_circuit(circuit);
  StateVector sv;
  sv.n_qubits = n;
  sv.amplitudes.assign(std::size_t{1} << n, 0.0);
  sv.amplitudes[0] = 1.0;
  for (const Gate& g : circuit.gates) {
    const Tensor u = gate_matrix(g);
    if (g.arity() == 1) {
      apply_one(sv.amplitudes, n, g.qubits[0], u.data());
    } else {
      apply_two(sv.amplitudes, n, g.qubits[0], g.qubits[1], u.data());
    }
  }
  return sv;
}

cd oracle_amplitude(const Circuit& circuit, const Bitstring& bitstring, int max_qubits) {
  return statevector(circuit, max_qubits).amplitude(bitstring);
}

std::vector<Bitstring> sample_bitstrings(const StateVector& psi, std::size_t k,
                                         std::uint64_t seed) {
  std::vector<double> cdf(psi.amplitudes.size());
  double total = 0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    total += std::norm(psi.amplitudes[i]);
    cdf[i] = total;
  }
  Rng rng(seed);
  std::vector<Bitstring> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    out.push_back(Bitstring::from_index(i, psi.n_qubits));
  }
  return out;
}

}  // namespace matnc

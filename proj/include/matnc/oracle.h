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

#ifndef MATNC_ORACLE_H_
#define MATNC_ORACLE_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "matnc/bitstring.h"
#include "matnc/circuit.h"

namespace matnc {

inline constexpr int kDefaultOracleQubits = 20;

// Full state of n qubits; amplitudes[i] belongs to Bitstring::from_index(i).
struct StateVector {
  int n_qubits = 0;
  std::vector<std::complex<double>> amplitudes;

  std::complex<double> amplitude(const Bitstring& b) const;
  double norm_squared() const;
};

// Applies the circuit's gates in order to |0...0>. Throws InvalidArgument
// when n exceeds `max_qubits`.
StateVector statevector(const Circuit& circuit, int max_qubits = kDefaultOracleQubits);

std::complex<double> oracle_amplitude(const Circuit& circuit, const Bitstring& bitstring,
                                      int max_qubits = kDefaultOracleQubits);

// k bitstrings drawn independently from |psi|^2.
std::vector<Bitstring> sample_bitstrings(const StateVector& psi, std::size_t k,
                                         std::uint64_t seed);

}  // namespace matnc

#endif  // MATNC_ORACLE_H_

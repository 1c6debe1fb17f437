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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "matnc/error.h"

namespace matnc {
namespace {

using cd = std::complex<double>;

TEST(Statevector, EmptyCircuit) {
  StateVector psi = statevector(Circuit{2, {}});
  EXPECT_EQ(psi.amplitudes, (std::vector<cd>{1, 0, 0, 0}));
  EXPECT_EQ(oracle_amplitude(Circuit{3, {}}, Bitstring("000")), cd(1));
  EXPECT_EQ(oracle_amplitude(Circuit{3, {}}, Bitstring("010")), cd(0));
}

TEST(Statevector, Hadamard) {
  StateVector psi = statevector(parse_circuit("1\n0 h 0\n"));
  EXPECT_NEAR(psi.amplitudes[0].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(psi.amplitudes[1].real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Statevector, SqrtXTwiceFlips) {
  StateVector psi = statevector(parse_circuit("1\n0 x_1_2 0\n1 x_1_2 0\n"));
  EXPECT_EQ(psi.amplitudes[0], cd(0));
  EXPECT_EQ(psi.amplitudes[1], cd(1));
}

TEST(Statevector, QubitZeroIsMostSignificant) {
  StateVector psi = statevector(parse_circuit("3\n0 x_1_2 0\n1 x_1_2 0\n"));
  EXPECT_EQ(psi.amplitude(Bitstring("100")), cd(1));
  EXPECT_EQ(psi.amplitudes[4], cd(1));
}

TEST(Statevector, TwoQubitSlotOrder) {
  // cz is symmetric; fsim is not once phi acts, so check against a direct
  // application on |01> with qubit 0 as slot 0.
  Circuit c = parse_circuit("2\n0 x_1_2 1\n1 x_1_2 1\n2 fs 0 1 0.3 0.9\n");
  StateVector psi = statevector(c);
  EXPECT_NEAR(std::abs(psi.amplitude(Bitstring("01")) - cd(std::cos(0.3))), 0, 1e-15);
  EXPECT_NEAR(std::abs(psi.amplitude(Bitstring("10")) - cd(0, -std::sin(0.3))), 0, 1e-15);
}

TEST(Statevector, NormalizedOnTenQubits) {
  StateVector psi = statevector(random_circuit(10, 5, 12, 3));
  EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-10);
  double total = 0;
  Circuit c = random_circuit(10, 5, 12, 3);
  for (std::uint64_t i = 0; i < 1024; ++i) total += std::norm(psi.amplitude(Bitstring::from_index(i, 10)));
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Statevector, GatesWithinACycleCommute) {
  Circuit c = random_circuit(8, 4, 6, 5);
  Circuit reversed = c;
  // Reverse the gate order inside every cycle.
  auto begin = reversed.gates.begin();
  while (begin != reversed.gates.end()) {
    auto end = begin;
    while (end != reversed.gates.end() && end->cycle == begin->cycle) ++end;
    std::reverse(begin, end);
    begin = end;
  }
  StateVector a = statevector(c), b = statevector(reversed);
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
    EXPECT_LT(std::abs(a.amplitudes[i] - b.amplitudes[i]), 1e-14);
  }
}

TEST(Statevector, Errors) {
  EXPECT_THROW(statevector(Circuit{21, {}}), InvalidArgument);
  EXPECT_THROW(statevector(Circuit{6, {}}, 5), InvalidArgument);
  EXPECT_THROW(statevector(Circuit{2, {}}).amplitude(Bitstring("0")), MismatchError);
}

TEST(Sampler, FollowsBornRule) {
  StateVector psi = statevector(random_circuit(4, 2, 6, 1));
  const std::size_t k = 200000;
  std::map<std::string, double> freq;
  for (const Bitstring& b : sample_bitstrings(psi, k, 3)) freq[b.str()] += 1.0 / k;
  for (std::uint64_t i = 0; i < 16; ++i) {
    double p = std::norm(psi.amplitudes[i]);
    double sd = std::sqrt(p * (1 - p) / k);
    EXPECT_NEAR(freq[Bitstring::from_index(i, 4).str()], p, 5 * sd + 1e-12);
  }
  EXPECT_EQ(sample_bitstrings(psi, 10, 3), sample_bitstrings(psi, 10, 3));
}

}  // namespace
}  // namespace matnc

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

#ifndef MATNC_CIRCUIT_H_
#define MATNC_CIRCUIT_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "matnc/tensor.h"

namespace matnc {

enum class GateKind { kSqrtX, kSqrtY, kSqrtW, kFsim, kH, kT, kCz };

struct Gate {
  GateKind kind = GateKind::kH;
  std::array<int, 2> qubits = {-1, -1};
  // fsim angles in radians; unused by other kinds.
  double theta = 0.0;
  double phi = 0.0;
  int cycle = 0;

  int arity() const { return kind == GateKind::kFsim || kind == GateKind::kCz ? 2 : 1; }
};

struct Circuit {
  int n_qubits = 0;
  // Sorted by cycle; no two gates of a cycle share a qubit.
  std::vector<Gate> gates;
};

// File-format gate name ("x_1_2", "fs", ...).
std::string_view gate_name(GateKind kind);

// Parses the circuit text format:
//
//   <n_qubits>
//   <cycle> <gate> <qubit> [<qubit2>] [<theta> <phi>]
//   ...
//
// Blank lines and lines starting with '#' are ignored. Errors carry the
// 1-based line number.
Circuit parse_circuit(std::string_view text);

std::string format_circuit(const Circuit& circuit);

// Throws InvalidArgument when a gate has bad qubits or two gates of one
// cycle touch the same qubit.
void validate_circuit(const Circuit& circuit);

// Row-major unitary as a tensor with indices (out, in) for one-qubit gates
// and (out0, out1, in0, in1) for two-qubit gates, where slot 0 is
// gate.qubits[0]. Index ids are 0..rank-1, tagged internal.
Tensor gate_matrix(const Gate& gate);

// Tensor network of a circuit applied to |0...0>, with one open output
// index per qubit.
struct TensorNetwork {
  int n_qubits = 0;
  std::vector<Tensor> tensors;
  // open_outputs[q] is the output index of qubit q.
  std::vector<Index> open_outputs;
  // output_tensor[q] is the tensor carrying open_outputs[q].
  std::vector<int> output_tensor;
  std::vector<bool> bright;
  // Dimension of every index id; ids are dense in [0, index_dims.size()).
  std::vector<std::int64_t> index_dims;

  int size() const { return static_cast<int>(tensors.size()); }
  // Qubits whose outputs sit on tensor t, ascending.
  std::vector<int> outputs_on(int t) const;
  // Hash of the tensor/index structure (not the data).
  std::uint64_t fingerprint() const;

  // Builds a network from arbitrary tensors. Indices tagged kOutput become
  // the open outputs (their `qubit` fields must be 0..n-1, each once); every
  // other id must appear on exactly two tensors. Ids must be dense from 0.
  static TensorNetwork from_tensors(std::vector<Tensor> tensors);
};

TensorNetwork build_tensor_network(const Circuit& circuit);

// Random circuit in the style of supremacy experiments: qubits on a grid
// with `cols` columns; each of `depth` cycles applies a random gate from
// {sqrt_x, sqrt_y, sqrt_w} to every qubit (never repeating the previous one
// on that qubit) followed by fsim(pi/2, pi/6) on one of four coupler
// patterns in the order ABCDCDAB. `final_single_layer` appends one more
// single-qubit layer.
Circuit random_circuit(int n_qubits, int cols, int depth, std::uint64_t seed,
                       bool final_single_layer = true);

}  // namespace matnc

#endif  // MATNC_CIRCUIT_H_

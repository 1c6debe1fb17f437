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

#ifndef MATNC_COST_MODEL_H_
#define MATNC_COST_MODEL_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "matnc/bitstring.h"
#include "matnc/circuit.h"
#include "matnc/tensor.h"

namespace matnc {

// One pairwise contraction. Tensor ids 0..T-1 are the network's tensors;
// step s produces id T + s.
struct ContractionStep {
  int lhs = 0;
  int rhs = 0;
  int result = 0;

  friend bool operator==(const ContractionStep&, const ContractionStep&) = default;
};

struct ContractionOrder {
  int num_tensors = 0;
  std::vector<ContractionStep> steps;

  // Id of the tensor left after the last step.
  int final_id() const { return steps.empty() ? 0 : steps.back().result; }

  friend bool operator==(const ContractionOrder&, const ContractionOrder&) = default;
};

// Throws MismatchError unless `order` consumes every tensor of `tn` exactly
// once in T-1 steps with results numbered T, T+1, ...
void validate_order(const ContractionOrder& order, const TensorNetwork& tn);

// Index ids (sorted) of every tensor id along an order, counting output
// indices and `sliced` ids as fixed, plus the multiplication count of every
// step under that convention.
struct OrderShapes {
  std::vector<std::vector<IndexId>> sets;
  std::vector<std::uint64_t> step_costs;

  std::uint64_t elements(int id, std::span<const std::int64_t> dims) const;
};

OrderShapes order_shapes(const ContractionOrder& order, const TensorNetwork& tn,
                         std::span<const IndexId> sliced = {});

// Steps of an order cut at every consumption of a bright tensor.
//
// blocks[0] holds the steps before the first bright tensor is consumed.
// Consuming a bright tensor opens one layer per output it carries (ascending
// qubit id; when both operands are bright, lhs first). blocks[l] for l >= 1
// runs once output layer_order[l-1] and all earlier ones are fixed. A step
// opening m layers at once belongs to the last of them; the m-1 before it
// are empty. When the network is a single tensor its outputs open after the
// (empty) step list.
struct BlockPartition {
  std::vector<int> layer_order;
  // [begin, end) step ranges, n_qubits + 1 of them.
  std::vector<std::pair<int, int>> blocks;
  // Multiplications of one execution of each block.
  std::vector<std::uint64_t> block_costs;

  int n_layers() const { return static_cast<int>(layer_order.size()); }
};

BlockPartition partition_blocks(const ContractionOrder& order,
                                const TensorNetwork& tn,
                                std::span<const IndexId> sliced = {});

// w[l] is the number of distinct length-l prefixes (the width of layer
// l + 1), for l = 0..n. w[0] = 1 and w[n] = k distinct bitstrings.
struct LayerWidths {
  std::vector<std::uint64_t> w;
  std::uint64_t k = 0;
};

// Widths of the prefix trie over `bitstrings` read in `layer_order`.
LayerWidths layer_widths(std::span<const int> layer_order,
                         std::span<const Bitstring> bitstrings);

inline LayerWidths layer_widths(const BlockPartition& partition,
                                std::span<const Bitstring> bitstrings) {
  return layer_widths(partition.layer_order, bitstrings);
}

// Expected distinct-prefix counts of k uniform random n-bit strings,
// 2^l (1 - (1 - 2^-l)^k), rounded and clamped to [1, k].
LayerWidths expected_widths(std::uint64_t k, int n);

// Multiplications for one amplitude: the sum of all step costs.
std::uint64_t single_cost(const ContractionOrder& order, const TensorNetwork& tn,
                          std::span<const IndexId> sliced = {});

// Multiplications for all amplitudes with full prefix reuse:
// sum over l of w[l] * block_costs[l]. Throws MismatchError on a length
// mismatch.
std::uint64_t multi_cost(const BlockPartition& partition, const LayerWidths& widths);

struct CostReport {
  std::uint64_t single_cost = 0;
  std::vector<std::uint64_t> block_costs;
  std::uint64_t multi_cost = 0;
  std::uint64_t k = 0;
  std::uint64_t linear_baseline = 0;
  // linear_baseline / multi_cost.
  double reuse_ratio = 1.0;
};

CostReport cost_report(const BlockPartition& partition, const LayerWidths& widths);

}  // namespace matnc

#endif  // MATNC_COST_MODEL_H_

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

#ifndef MATNC_REUSE_PLAN_H_
#define MATNC_REUSE_PLAN_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "matnc/bitstring.h"
#include "matnc/circuit.h"
#include "matnc/cost_model.h"

namespace matnc {

// Node of the reuse tree. The edge into a node runs blocks
// [first_block, last_block] of the partition and fixes the outputs of
// layers max(first_block, 1) .. last_block to `values`. Before coalescing
// every non-root node covers exactly one block; the root covers block 0.
struct ReuseNode {
  int parent = -1;
  // Ordered by the first fixed value: 0 before 1.
  std::vector<int> children;
  int first_block = 0;
  int last_block = 0;
  std::vector<std::uint8_t> values;
  // Index into ReuseTree::distinct at leaves, else -1.
  int leaf = -1;
};

// Prefix trie of the requested bitstrings read in layer order.
struct ReuseTree {
  int n_qubits = 0;
  std::vector<int> layer_order;
  std::vector<std::pair<int, int>> blocks;
  // nodes[0] is the root; nodes are numbered in depth-first order.
  std::vector<ReuseNode> nodes;
  std::vector<Bitstring> distinct;
  // request_to_distinct[i] is the leaf bitstring of request i.
  std::vector<int> request_to_distinct;
  std::vector<std::uint64_t> multiplicity;

  bool is_leaf(int node) const { return nodes[node].children.empty(); }
  // Number of nodes at each depth 0..n (the layer widths).
  std::vector<std::uint64_t> nodes_per_depth() const;
};

// Throws InvalidArgument for an empty set, MismatchError on bad lengths.
ReuseTree build_tree(const BlockPartition& partition, std::span<const Bitstring> bitstrings);

// Merges every chain of single-child nodes into one edge.
ReuseTree coalesce(const ReuseTree& tree);

// Live tensor elements of a depth-first traversal, derived from shapes
// alone. Counted tensors are step results (the network's own tensors and
// their fixed slices are input storage). A result is live from its
// creation until the last frontier holding it is gone; operands stay live
// until their consuming step's result exists. A branching node keeps its
// frontier until its last child completes, and every child starts from a
// shared copy of it.
struct MemoryPlan {
  std::uint64_t peak_elements = 0;
  std::uint64_t single_amplitude_peak = 0;
  // Frontier elements kept by each node for its children (0 unless the node
  // branches).
  std::vector<std::uint64_t> cached_elements;
  // Cached tensors that no child read again.
  std::uint64_t unread_cached_tensors = 0;
  // Elements still live when the traversal ends.
  std::uint64_t leaked_elements = 0;

  std::uint64_t peak_bytes() const { return peak_elements * 16; }
};

// Throws MismatchError when the tree was not built from `order`'s
// partition.
MemoryPlan plan_memory(const ReuseTree& tree, const TensorNetwork& tn,
                       const ContractionOrder& order, std::span<const IndexId> sliced = {});

// Peak live elements when the same bitstrings are evaluated layer by layer,
// whether or not `tree` is coalesced. A node's frontier is shared with all
// but its last child, which takes it over; leaf frontiers are kept until the
// next layer is done.
std::uint64_t plan_memory_breadth_first(const ReuseTree& tree, const TensorNetwork& tn,
                                        const ContractionOrder& order,
                                        std::span<const IndexId> sliced = {});

}  // namespace matnc

#endif  // MATNC_REUSE_PLAN_H_

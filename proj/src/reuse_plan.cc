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

#include "matnc/reuse_plan.h"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "matnc/error.h"

namespace matnc {
namespace {

struct TrieBuilder {
  const std::vector<std::string>* keys;
  int n;
  std::vector<ReuseNode>* nodes;

  // Keys in [lo, hi) share their first `depth` characters.
  int build(std::size_t lo, std::size_t hi, int depth, int parent) {
    int id = static_cast<int>(nodes->size());
    ReuseNode node;
    node.parent = parent;
    node.first_block = depth;
    node.last_block = depth;
    if (depth > 0) {
      node.values.push_back(static_cast<std::uint8_t>((*keys)[lo][depth - 1] - '0'));
    }
    nodes->push_back(std::move(node));
    if (depth == n) {
      (*nodes)[id].leaf = static_cast<int>(lo);
      return id;
    }
    std::size_t mid = lo;
    while (mid < hi && (*keys)[mid][depth] == '0') ++mid;
    if (mid > lo) {
      int c = build(lo, mid, depth + 1, id);
      (*nodes)[id].children.push_back(c);
    }
    if (hi > mid) {
      int c = build(mid, hi, depth + 1, id);
      (*nodes)[id].children.push_back(c);
    }
    return id;
  }
};

void check_consistent(const ReuseTree& tree, const BlockPartition& partition) {
  if (tree.layer_order != partition.layer_order || tree.blocks != partition.blocks) {
    throw MismatchError("reuse tree was not built from this order's partition");
  }
}

using SimFrontier = std::vector<std::pair<int, int>>;

// Reference-counted replay of the step results along a traversal.
class LiveSim {
 public:
  LiveSim(const ReuseTree& tree, const TensorNetwork& tn, const ContractionOrder& order,
          std::span<const IndexId> sliced)
      : tree_(tree), order_(order), num_tensors_(tn.size()) {
    validate_order(order, tn);
    check_consistent(tree, partition_blocks(order, tn, sliced));
    OrderShapes shapes = order_shapes(order, tn, sliced);
    sizes_.resize(shapes.sets.size());
    for (std::size_t id = 0; id < sizes_.size(); ++id) {
      sizes_[id] = shapes.elements(static_cast<int>(id), tn.index_dims);
    }
  }

  void run_node(int node, SimFrontier& frontier) {
    const ReuseNode& nd = tree_.nodes[node];
    for (int b = nd.first_block; b <= nd.last_block; ++b) {
      auto [begin, end] = tree_.blocks[b];
      for (int s = begin; s < end; ++s) {
        const ContractionStep& step = order_.steps[s];
        int lhs = take(frontier, step.lhs);
        int rhs = take(frontier, step.rhs);
        int r = allocate(sizes_[step.result]);
        release(lhs);
        release(rhs);
        frontier.emplace_back(step.result, r);
      }
    }
  }

  SimFrontier share(const SimFrontier& frontier) {
    for (auto& [id, inst] : frontier) {
      ++refs_[inst];
      cached_[inst] = 1;
    }
    return frontier;
  }

  void release_all(SimFrontier& frontier) {
    for (auto& [id, inst] : frontier) release(inst);
    frontier.clear();
  }

  std::uint64_t elements(const SimFrontier& frontier) const {
    std::uint64_t total = 0;
    for (auto& [id, inst] : frontier) total += size_[inst];
    return total;
  }

  std::uint64_t unread_cached() const {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < cached_.size(); ++i) {
      if (cached_[i] && reads_[i] == 0) ++count;
    }
    return count;
  }

  std::uint64_t peak() const { return peak_; }
  std::uint64_t live() const { return live_; }

 private:
  // Returns the instance handle, or -1 for a network tensor.
  int take(SimFrontier& frontier, int id) {
    if (id < num_tensors_) return -1;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (frontier[i].first == id) {
        int inst = frontier[i].second;
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(i));
        if (cached_[inst]) ++reads_[inst];
        return inst;
      }
    }
    throw MismatchError("step operand " + std::to_string(id) + " is not available");
  }

  int allocate(std::uint64_t size) {
    size_.push_back(size);
    refs_.push_back(1);
    cached_.push_back(0);
    reads_.push_back(0);
    live_ += size;
    peak_ = std::max(peak_, live_);
    return static_cast<int>(size_.size()) - 1;
  }

  void release(int inst) {
    if (inst < 0) return;
    if (--refs_[inst] == 0) live_ -= size_[inst];
  }

  const ReuseTree& tree_;
  const ContractionOrder& order_;
  int num_tensors_;
  std::vector<std::uint64_t> sizes_;
  std::vector<std::uint64_t> size_;
  std::vector<int> refs_;
  std::vector<char> cached_;
  std::vector<std::uint32_t> reads_;
  std::uint64_t live_ = 0;
  std::uint64_t peak_ = 0;
};

void dfs(LiveSim& sim, const ReuseTree& tree, int node, SimFrontier frontier,
         std::vector<std::uint64_t>& cached) {
  sim.run_node(node, frontier);
  const ReuseNode& nd = tree.nodes[node];
  if (nd.children.size() == 1) {
    dfs(sim, tree, nd.children[0], std::move(frontier), cached);
    return;
  }
  if (nd.children.size() > 1) {
    cached[node] = sim.elements(frontier);
    for (int c : nd.children) dfs(sim, tree, c, sim.share(frontier), cached);
  }
  sim.release_all(frontier);
}

ReuseTree path_tree(const ReuseTree& tree) {
  std::vector<Bitstring> one{tree.distinct.front()};
  BlockPartition p;
  p.layer_order = tree.layer_order;
  p.blocks = tree.blocks;
  p.block_costs.assign(tree.blocks.size(), 0);
  return build_tree(p, one);
}

}  // namespace

std::vector<std::uint64_t> ReuseTree::nodes_per_depth() const {
  std::vector<std::uint64_t> counts(layer_order.size() + 1, 0);
  for (const ReuseNode& node : nodes) {
    for (int d = node.first_block; d <= node.last_block; ++d) ++counts[d];
  }
  return counts;
}

ReuseTree build_tree(const BlockPartition& partition, std::span<const Bitstring> bitstrings) {
  if (bitstrings.empty()) throw InvalidArgument("build_tree needs at least one bitstring");
  const int n = partition.n_layers();
  if (static_cast<int>(partition.blocks.size()) != n + 1) {
    throw MismatchError("partition has " + std::to_string(partition.blocks.size()) +
                        " blocks for " + std::to_string(n) + " layers");
  }
  ReuseTree tree;
  tree.n_qubits = n;
  tree.layer_order = partition.layer_order;
  tree.blocks = partition.blocks;

  std::unordered_map<std::string, int> first_seen;
  std::vector<std::string> keys;
  std::vector<Bitstring> originals;
  std::vector<int> request_key(bitstrings.size());
  for (std::size_t i = 0; i < bitstrings.size(); ++i) {
    const Bitstring& b = bitstrings[i];
    if (b.size() != n) {
      throw MismatchError("bitstring " + std::to_string(i) + " has length " +
                          std::to_string(b.size()) + ", expected " + std::to_string(n));
    }
    std::string key(n, '0');
    for (int l = 0; l < n; ++l) key[l] = static_cast<char>('0' + b.bit(partition.layer_order[l]));
    auto [it, inserted] = first_seen.emplace(key, static_cast<int>(keys.size()));
    if (inserted) {
      keys.push_back(key);
      originals.push_back(b);
    }
    request_key[i] = it->second;
  }

  std::vector<int> by_key(keys.size());
  for (std::size_t i = 0; i < by_key.size(); ++i) by_key[i] = static_cast<int>(i);
  std::sort(by_key.begin(), by_key.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<std::string> sorted(keys.size());
  std::vector<int> rank_of(keys.size());
  for (std::size_t r = 0; r < by_key.size(); ++r) {
    sorted[r] = keys[by_key[r]];
    rank_of[by_key[r]] = static_cast<int>(r);
    tree.distinct.push_back(originals[by_key[r]]);
  }
  tree.multiplicity.assign(keys.size(), 0);
  tree.request_to_distinct.resize(bitstrings.size());
  for (std::size_t i = 0; i < bitstrings.size(); ++i) {
    int d = rank_of[request_key[i]];
    tree.request_to_distinct[i] = d;
    ++tree.multiplicity[d];
  }

  TrieBuilder builder{&sorted, n, &tree.nodes};
  builder.build(0, sorted.size(), 0, -1);
  return tree;
}

ReuseTree coalesce(const ReuseTree& tree) {
  ReuseTree out;
  out.n_qubits = tree.n_qubits;
  out.layer_order = tree.layer_order;
  out.blocks = tree.blocks;
  out.distinct = tree.distinct;
  out.request_to_distinct = tree.request_to_distinct;
  out.multiplicity = tree.multiplicity;
  out.nodes.reserve(tree.nodes.size());

  // Explicit stack keeps preorder numbering without deep recursion.
  struct Item {
    int old_node;
    int parent;
  };
  std::vector<Item> stack{{0, -1}};
  while (!stack.empty()) {
    Item item = stack.back();
    stack.pop_back();
    ReuseNode merged = tree.nodes[item.old_node];
    merged.parent = item.parent;
    int tail = item.old_node;
    while (tree.nodes[tail].children.size() == 1) {
      tail = tree.nodes[tail].children[0];
      const ReuseNode& next = tree.nodes[tail];
      merged.values.insert(merged.values.end(), next.values.begin(), next.values.end());
      merged.last_block = next.last_block;
      merged.leaf = next.leaf;
    }
    merged.children.clear();
    int id = static_cast<int>(out.nodes.size());
    if (item.parent >= 0) out.nodes[item.parent].children.push_back(id);
    out.nodes.push_back(std::move(merged));
    const auto& kids = tree.nodes[tail].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, id});
  }
  return out;
}

MemoryPlan plan_memory(const ReuseTree& tree, const TensorNetwork& tn,
                       const ContractionOrder& order, std::span<const IndexId> sliced) {
  MemoryPlan plan;
  plan.cached_elements.assign(tree.nodes.size(), 0);
  LiveSim sim(tree, tn, order, sliced);
  dfs(sim, tree, 0, {}, plan.cached_elements);
  plan.peak_elements = sim.peak();
  plan.unread_cached_tensors = sim.unread_cached();
  plan.leaked_elements = sim.live();

  ReuseTree single = path_tree(tree);
  LiveSim single_sim(single, tn, order, sliced);
  std::vector<std::uint64_t> unused(single.nodes.size(), 0);
  dfs(single_sim, single, 0, {}, unused);
  plan.single_amplitude_peak = single_sim.peak();
  return plan;
}

static std::uint64_t breadth_first_peak(const ReuseTree& tree, const TensorNetwork& tn,
                                        const ContractionOrder& order,
                                        std::span<const IndexId> sliced) {
  LiveSim sim(tree, tn, order, sliced);
  std::vector<int> generation{0};
  std::vector<SimFrontier> frontiers(1);
  sim.run_node(0, frontiers[0]);
  while (true) {
    std::vector<int> next;
    std::vector<SimFrontier> next_frontiers;
    for (std::size_t i = 0; i < generation.size(); ++i) {
      const auto& kids = tree.nodes[generation[i]].children;
      for (std::size_t j = 0; j < kids.size(); ++j) {
        const int c = kids[j];
        // The last child inherits the parent's frontier.
        SimFrontier f = j + 1 < kids.size() ? sim.share(frontiers[i]) : std::move(frontiers[i]);
        sim.run_node(c, f);
        next.push_back(c);
        next_frontiers.push_back(std::move(f));
      }
    }
    for (SimFrontier& f : frontiers) sim.release_all(f);
    if (next.empty()) break;
    generation = std::move(next);
    frontiers = std::move(next_frontiers);
  }
  return sim.peak();
}

std::uint64_t plan_memory_breadth_first(const ReuseTree& tree, const TensorNetwork& tn,
                                        const ContractionOrder& order,
                                        std::span<const IndexId> sliced) {
  // Generations are layers, so undo any coalescing first.
  const BlockPartition partition = partition_blocks(order, tn, sliced);
  check_consistent(tree, partition);
  const ReuseTree layered = build_tree(partition, tree.distinct);
  return breadth_first_peak(layered, tn, order, sliced);
}

}  // namespace matnc

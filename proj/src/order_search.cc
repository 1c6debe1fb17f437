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

#include "matnc/order_search.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>

#include "matnc/error.h"
#include "matnc/rng.h"

namespace matnc {
namespace {

using IdSet = std::vector<IndexId>;

void sym_diff_into(const IdSet& a, const IdSet& b, IdSet& out) {
  out.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
}

bool intersects(const IdSet& a, const IdSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

double union_cost(const IdSet& a, const IdSet& b, const std::vector<std::int64_t>& dims) {
  double cost = 1.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    IndexId id;
    if (j == b.end() || (i != a.end() && *i < *j)) {
      id = *i++;
    } else if (i == a.end() || *j < *i) {
      id = *j++;
    } else {
      id = *i++;
      ++j;
    }
    cost *= static_cast<double>(dims[id]);
  }
  return cost;
}

double elements(const IdSet& s, const std::vector<std::int64_t>& dims) {
  double e = 1.0;
  for (IndexId id : s) e *= static_cast<double>(dims[id]);
  return e;
}

std::vector<IdSet> leaf_sets(const TensorNetwork& tn) {
  std::vector<char> is_output(tn.index_dims.size(), 0);
  for (const Index& o : tn.open_outputs) is_output[o.id] = 1;
  std::vector<IdSet> sets;
  sets.reserve(tn.tensors.size());
  for (const Tensor& t : tn.tensors) {
    IdSet ids;
    for (const Index& i : t.indices()) {
      if (!is_output[i.id]) ids.push_back(i.id);
    }
    std::sort(ids.begin(), ids.end());
    sets.push_back(std::move(ids));
  }
  return sets;
}

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (int x : v) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

// Binary contraction tree. Leaves are 0..T-1, internal nodes T..2T-2.
struct Tree {
  int num_leaves = 0;
  std::vector<int> left, right, parent;
  int root = 0;
  // Consumption priority of bright leaves; lower goes first.
  std::vector<double> priority;

  bool is_leaf(int node) const { return node < num_leaves; }
  int sibling(int node) const {
    const int p = parent[node];
    return left[p] == node ? right[p] : left[p];
  }
  void replace_child(int p, int old_child, int new_child) {
    if (left[p] == old_child) {
      left[p] = new_child;
    } else {
      right[p] = new_child;
    }
  }
};

Tree tree_from_order(const ContractionOrder& order, const TensorNetwork& tn) {
  const int t = order.num_tensors;
  Tree tree;
  tree.num_leaves = t;
  tree.left.assign(static_cast<std::size_t>(2 * t - 1), -1);
  tree.right.assign(static_cast<std::size_t>(2 * t - 1), -1);
  tree.parent.assign(static_cast<std::size_t>(2 * t - 1), -1);
  tree.priority.assign(static_cast<std::size_t>(t), 0.0);
  for (const ContractionStep& st : order.steps) {
    tree.left[st.result] = st.lhs;
    tree.right[st.result] = st.rhs;
    tree.parent[st.lhs] = st.result;
    tree.parent[st.rhs] = st.result;
    for (int operand : {st.lhs, st.rhs}) {
      if (operand < t && tn.bright[operand]) {
        tree.priority[operand] = static_cast<double>(st.result);
      }
    }
  }
  tree.root = order.final_id();
  return tree;
}

// Scores trees: index sets, canonical linearization, and loss.
class TreeScorer {
 public:
  TreeScorer(const TensorNetwork& tn, const SearchConfig& config,
             std::span<const Bitstring> bitstrings)
      : tn_(tn), config_(config), bitstrings_(bitstrings), leaf_sets_(leaf_sets(tn)) {
    outputs_of_.resize(tn.tensors.size());
    for (int q = 0; q < tn.n_qubits; ++q) outputs_of_[tn.output_tensor[q]].push_back(q);
    sets_.resize(static_cast<std::size_t>(std::max(1, 2 * tn.size() - 1)));
    for (int t = 0; t < tn.size(); ++t) sets_[t] = leaf_sets_[t];
  }

  const IdSet& set(int node) const { return sets_[node]; }

  void compute_sets(const Tree& tree) {
    post_.clear();
    stack_.clear();
    stack_.push_back(tree.root);
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      if (tree.is_leaf(node)) continue;
      post_.push_back(node);
      stack_.push_back(tree.left[node]);
      stack_.push_back(tree.right[node]);
    }
    for (auto it = post_.rbegin(); it != post_.rend(); ++it) {
      sym_diff_into(sets_[tree.left[*it]], sets_[tree.right[*it]], sets_[*it]);
    }
  }

  // True unless `node` joins two non-scalar subtrees sharing no index.
  bool connected_at(const Tree& tree, int node) const {
    const IdSet& a = sets_[tree.left[node]];
    const IdSet& b = sets_[tree.right[node]];
    return a.empty() || b.empty() || intersects(a, b);
  }

  // Canonical linearization of `tree` (sets must be current). Writes the
  // internal nodes in execution order to `sequence` and returns the loss.
  double score(const Tree& tree, std::vector<int>* sequence) {
    const int t = tree.num_leaves;
    const int n_internal = t - 1;
    remaining_.assign(static_cast<std::size_t>(n_internal), 0);
    for (int node = t; node < 2 * t - 1; ++node) {
      remaining_[node - t] = !tree.is_leaf(tree.left[node]) + !tree.is_leaf(tree.right[node]);
    }
    free_.clear();
    using Ready = std::pair<double, int>;
    std::priority_queue<Ready, std::vector<Ready>, std::greater<>> opening;
    auto is_bright_leaf = [&](int node) { return tree.is_leaf(node) && tn_.bright[node]; };
    auto make_ready = [&](int node) {
      const bool lb = is_bright_leaf(tree.left[node]);
      const bool rb = is_bright_leaf(tree.right[node]);
      if (!lb && !rb) {
        free_.push_back(node);
        return;
      }
      double pr = std::numeric_limits<double>::infinity();
      if (lb) pr = std::min(pr, tree.priority[tree.left[node]]);
      if (rb) pr = std::min(pr, tree.priority[tree.right[node]]);
      opening.push({pr, node});
    };
    for (int node = t; node < 2 * t - 1; ++node) {
      if (remaining_[node - t] == 0) make_ready(node);
    }

    layer_order_.clear();
    block_costs_.assign(static_cast<std::size_t>(tn_.n_qubits) + 1, 0.0);
    int block = 0;
    if (sequence != nullptr) sequence->clear();
    for (int emitted = 0; emitted < n_internal; ++emitted) {
      int node;
      if (!free_.empty()) {
        node = free_.back();
        free_.pop_back();
      } else {
        node = opening.top().second;
        opening.pop();
        for (int child : {tree.left[node], tree.right[node]}) {
          if (!is_bright_leaf(child)) continue;
          for (int q : outputs_of_[child]) layer_order_.push_back(q);
          block += static_cast<int>(outputs_of_[child].size());
        }
      }
      block_costs_[block] +=
          union_cost(sets_[tree.left[node]], sets_[tree.right[node]], tn_.index_dims);
      if (sequence != nullptr) sequence->push_back(node);
      const int p = tree.parent[node];
      if (p >= 0 && --remaining_[p - t] == 0) make_ready(p);
    }
    if (t == 1) {
      for (int q : outputs_of_[0]) layer_order_.push_back(q);
    }

    const std::vector<double>& w = widths(layer_order_);
    double loss = 0.0;
    for (std::size_t l = 0; l < block_costs_.size(); ++l) loss += w[l] * block_costs_[l];
    return loss;
  }

  // Loss-side widths for a layer order, memoized.
  const std::vector<double>& widths(const std::vector<int>& layer_order) {
    if (config_.loss == Loss::kSingle) {
      ones_.assign(static_cast<std::size_t>(tn_.n_qubits) + 1, 1.0);
      return ones_;
    }
    auto it = memo_.find(layer_order);
    if (it != memo_.end()) return it->second;
    if (memo_.size() > 200000) memo_.clear();
    const LayerWidths lw = search_widths(layer_order, config_, bitstrings_);
    std::vector<double> w(lw.w.begin(), lw.w.end());
    return memo_.emplace(layer_order, std::move(w)).first->second;
  }

 private:
  const TensorNetwork& tn_;
  const SearchConfig& config_;
  std::span<const Bitstring> bitstrings_;
  std::vector<IdSet> leaf_sets_;
  std::vector<std::vector<int>> outputs_of_;
  std::vector<IdSet> sets_;
  std::vector<int> post_, stack_, remaining_, free_;
  std::vector<int> layer_order_;
  std::vector<double> block_costs_;
  std::vector<double> ones_;
  std::unordered_map<std::vector<int>, std::vector<double>, VectorHash> memo_;
};

ContractionOrder order_from_sequence(const Tree& tree, const std::vector<int>& sequence) {
  const int t = tree.num_leaves;
  std::vector<int> id_of(static_cast<std::size_t>(2 * t - 1));
  for (int leaf = 0; leaf < t; ++leaf) id_of[leaf] = leaf;
  ContractionOrder order;
  order.num_tensors = t;
  for (std::size_t s = 0; s < sequence.size(); ++s) {
    const int node = sequence[s];
    const int result = t + static_cast<int>(s);
    id_of[node] = result;
    order.steps.push_back({id_of[tree.left[node]], id_of[tree.right[node]], result});
  }
  return order;
}

// Leaves sharing an index with each leaf.
std::vector<std::vector<int>> leaf_neighbours(const TensorNetwork& tn,
                                              const std::vector<IdSet>& sets) {
  std::vector<std::vector<int>> owners(tn.index_dims.size());
  for (int t = 0; t < tn.size(); ++t) {
    for (IndexId id : sets[t]) owners[id].push_back(t);
  }
  std::vector<std::vector<int>> out(static_cast<std::size_t>(tn.size()));
  for (const auto& o : owners) {
    for (int a : o) {
      for (int b : o) {
        if (a != b) out[a].push_back(b);
      }
    }
  }
  for (auto& v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

struct Move {
  bool applied = false;
  // Internal nodes whose children changed.
  std::vector<int> changed;
};

// Applies a random move to `tree` in place.
Move propose(Tree& tree, Rng& rng, const std::vector<std::vector<int>>& neighbours,
                         const std::vector<int>& bright_leaves) {
  const int t = tree.num_leaves;
  const std::uint64_t kind = rng.below(10);

  if (kind >= 8 && bright_leaves.size() >= 2) {
    const std::size_t i = rng.below(bright_leaves.size());
    std::size_t j = rng.below(bright_leaves.size() - 1);
    if (j >= i) ++j;
    std::swap(tree.priority[bright_leaves[i]], tree.priority[bright_leaves[j]]);
    return {true, {}};
  }

  if (kind < 4 || kind >= 8) {
    // Rotation: p = (c(x, y), s) -> p = (c(x, s), y) or p = (c(y, s), x).
    const int p = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(t - 1)));
    int c = rng.below(2) ? tree.left[p] : tree.right[p];
    if (tree.is_leaf(c)) c = tree.sibling(c);
    if (tree.is_leaf(c)) return {};
    const int s = tree.sibling(c);
    const bool keep_left = rng.below(2) == 0;
    const int moved = keep_left ? tree.right[c] : tree.left[c];
    if (keep_left) {
      tree.right[c] = s;
    } else {
      tree.left[c] = s;
    }
    tree.parent[s] = c;
    tree.replace_child(p, s, moved);
    tree.parent[moved] = p;
    return {true, {c, p}};
  }

  // Leaf reattachment next to a node above one of the leaf's neighbours.
  const int leaf = static_cast<int>(rng.below(static_cast<std::uint64_t>(t)));
  const int p = tree.parent[leaf];
  const int s = tree.sibling(leaf);
  const int g = tree.parent[p];
  if (g >= 0) {
    tree.replace_child(g, p, s);
  } else {
    tree.root = s;
  }
  tree.parent[s] = g;

  int target;
  const auto& nb = neighbours[leaf];
  if (!nb.empty()) {
    target = nb[rng.below(nb.size())];
  } else {
    target = static_cast<int>(rng.below(static_cast<std::uint64_t>(t - 1)));
    if (target >= leaf) ++target;
  }
  while (tree.parent[target] >= 0 && rng.uniform() < 0.5) target = tree.parent[target];

  const int above = tree.parent[target];
  if (above >= 0) {
    tree.replace_child(above, target, p);
  } else {
    tree.root = p;
  }
  tree.parent[p] = above;
  tree.left[p] = target;
  tree.right[p] = leaf;
  tree.parent[target] = p;
  tree.parent[leaf] = p;

  Move move{true, {p}};
  if (g >= 0) move.changed.push_back(g);
  return move;
}

}  // namespace

ContractionOrder greedy_order(const TensorNetwork& tn, std::uint64_t seed) {
  const int t = tn.size();
  if (t == 0) throw InvalidArgument("network has no tensors");
  ContractionOrder order;
  order.num_tensors = t;

  std::vector<IdSet> sets = leaf_sets(tn);
  sets.resize(static_cast<std::size_t>(2 * t - 1));
  std::vector<std::array<int, 2>> owners(tn.index_dims.size(), {-1, -1});
  for (int i = 0; i < t; ++i) {
    for (IndexId id : sets[i]) (owners[id][0] < 0 ? owners[id][0] : owners[id][1]) = i;
  }
  std::vector<int> alive(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) alive[i] = i;

  using Key = std::tuple<double, std::size_t, std::uint64_t, int, int>;
  IdSet scratch;
  for (int next = t; next < 2 * t - 1; ++next) {
    bool found = false;
    Key best{};
    for (int a : alive) {
      for (IndexId id : sets[a]) {
        const int b = owners[id][0] == a ? owners[id][1] : owners[id][0];
        if (b <= a) continue;
        sym_diff_into(sets[a], sets[b], scratch);
        const std::uint64_t perturb =
            seed == 0 ? 0
                      : splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(a) << 32) |
                                                     static_cast<std::uint32_t>(b)));
        const Key key{union_cost(sets[a], sets[b], tn.index_dims), scratch.size(), perturb,
                      a, b};
        if (!found || key < best) {
          best = key;
          found = true;
        }
      }
    }
    int a, b;
    if (found) {
      a = std::get<3>(best);
      b = std::get<4>(best);
    } else {
      // No shared index left: join the two smallest tensors.
      std::vector<std::pair<double, int>> by_size;
      for (int x : alive) by_size.push_back({elements(sets[x], tn.index_dims), x});
      std::partial_sort(by_size.begin(), by_size.begin() + 2, by_size.end());
      a = std::min(by_size[0].second, by_size[1].second);
      b = std::max(by_size[0].second, by_size[1].second);
    }

    sym_diff_into(sets[a], sets[b], sets[next]);
    for (int operand : {a, b}) {
      for (IndexId id : sets[operand]) {
        auto& o = owners[id];
        if (std::binary_search(sets[next].begin(), sets[next].end(), id)) {
          (o[0] == operand ? o[0] : o[1]) = next;
        } else {
          o = {-1, -1};
        }
      }
    }
    std::erase(alive, a);
    std::erase(alive, b);
    alive.push_back(next);
    order.steps.push_back({a, b, next});
  }
  return order;
}

LayerWidths search_widths(std::span<const int> layer_order, const SearchConfig& config,
                          std::span<const Bitstring> bitstrings) {
  const int n = static_cast<int>(layer_order.size());
  if (config.widths_source == WidthsSource::kExpected) {
    return expected_widths(config.expected_k, n);
  }
  if (bitstrings.empty()) {
    LayerWidths ones;
    ones.k = 1;
    ones.w.assign(static_cast<std::size_t>(n) + 1, 1);
    return ones;
  }
  return layer_widths(layer_order, bitstrings);
}

double order_loss(const ContractionOrder& order, const TensorNetwork& tn,
                  const SearchConfig& config, std::span<const Bitstring> bitstrings) {
  const BlockPartition p = partition_blocks(order, tn);
  double loss = 0.0;
  if (config.loss == Loss::kSingle) {
    for (std::uint64_t c : p.block_costs) loss += 1.0 * static_cast<double>(c);
    return loss;
  }
  const LayerWidths w = search_widths(p.layer_order, config, bitstrings);
  for (std::size_t l = 0; l < p.block_costs.size(); ++l) {
    loss += static_cast<double>(w.w[l]) * static_cast<double>(p.block_costs[l]);
  }
  return loss;
}

SearchResult anneal_order(const TensorNetwork& tn, const ContractionOrder& init,
                          const SearchConfig& config, std::span<const Bitstring> bitstrings) {
  validate_order(init, tn);
  if (!(config.decay > 0.0 && config.decay < 1.0)) {
    throw InvalidArgument("temperature decay must lie in (0, 1)");
  }
  if (config.initial_temperature < 0.0) {
    throw InvalidArgument("initial temperature must be >= 0");
  }
  if (config.loss == Loss::kMulti && config.widths_source == WidthsSource::kExact &&
      bitstrings.empty()) {
    throw InvalidArgument("multi loss with exact widths needs bitstrings");
  }
  if (config.widths_source == WidthsSource::kExpected && config.expected_k == 0) {
    throw InvalidArgument("expected-width model needs k >= 1");
  }
  for (const Bitstring& b : bitstrings) {
    if (b.size() != tn.n_qubits) {
      throw MismatchError("bitstring length " + std::to_string(b.size()) + " for " +
                          std::to_string(tn.n_qubits) + " qubits");
    }
  }

  SearchResult result;
  result.order = init;
  result.initial_loss = order_loss(init, tn, config, bitstrings);
  result.best_loss = result.initial_loss;

  const int t = tn.size();
  if (config.budget > 0 && t >= 3) {
    TreeScorer scorer(tn, config, bitstrings);
    Tree current = tree_from_order(init, tn);
    scorer.compute_sets(current);
    double current_loss = scorer.score(current, nullptr);
    Tree best = current;
    bool improved = false;
    if (current_loss < result.best_loss) {
      result.best_loss = current_loss;
      improved = true;
    }

    const auto neighbours = leaf_neighbours(tn, leaf_sets(tn));
    std::vector<int> bright_leaves;
    for (int i = 0; i < t; ++i) {
      if (tn.bright[i]) bright_leaves.push_back(i);
    }

    Rng rng(config.seed);
    double temperature = config.initial_temperature * result.initial_loss;
    for (std::uint64_t it = 0; it < config.budget; ++it) {
      Tree saved = current;
      const Move move = propose(current, rng, neighbours, bright_leaves);
      bool accept = false;
      double loss = 0.0;
      if (move.applied) {
        scorer.compute_sets(current);
        bool ok = true;
        for (int node : move.changed) ok = ok && scorer.connected_at(current, node);
        if (ok) {
          loss = scorer.score(current, nullptr);
          const double delta = loss - current_loss;
          accept = delta <= 0.0 ||
                   (temperature > 0.0 && rng.uniform() < std::exp(-delta / temperature));
        }
      }
      if (accept) {
        current_loss = loss;
        ++result.accepted_moves;
        if (loss < result.best_loss) {
          result.best_loss = loss;
          best = current;
          improved = true;
        }
      } else {
        current = std::move(saved);
      }
      temperature *= config.decay;
    }

    if (improved) {
      std::vector<int> sequence;
      scorer.compute_sets(best);
      scorer.score(best, &sequence);
      result.order = order_from_sequence(best, sequence);
    }
  }

  const BlockPartition p = partition_blocks(result.order, tn);
  result.report = cost_report(p, search_widths(p.layer_order, config, bitstrings));
  return result;
}

int max_intermediate_rank(const ContractionOrder& order, const TensorNetwork& tn,
                          std::span<const IndexId> sliced) {
  const OrderShapes shapes = order_shapes(order, tn, sliced);
  int r = 0;
  for (std::size_t id = static_cast<std::size_t>(tn.size()); id < shapes.sets.size(); ++id) {
    r = std::max(r, static_cast<int>(shapes.sets[id].size()));
  }
  return r;
}

SliceSpec make_slice_spec(const ContractionOrder& order, const TensorNetwork& tn,
                          std::vector<IndexId> sliced_ids) {
  std::vector<char> is_output(tn.index_dims.size(), 0);
  for (const Index& o : tn.open_outputs) is_output[o.id] = 1;
  SliceSpec spec;
  for (IndexId id : sliced_ids) {
    if (id < 0 || id >= static_cast<IndexId>(tn.index_dims.size())) {
      throw InvalidArgument("sliced index " + std::to_string(id) + " not in network");
    }
    if (is_output[id]) {
      throw InvalidArgument("cannot slice output index " + std::to_string(id));
    }
    if (std::count(sliced_ids.begin(), sliced_ids.end(), id) > 1) {
      throw InvalidArgument("sliced index " + std::to_string(id) + " listed twice");
    }
    spec.n_slices *= static_cast<std::uint64_t>(tn.index_dims[id]);
  }
  const std::uint64_t base = single_cost(order, tn);
  const std::uint64_t sliced = single_cost(order, tn, sliced_ids);
  spec.overhead = base == 0 ? 1.0
                            : static_cast<double>(sliced) * static_cast<double>(spec.n_slices) /
                                  static_cast<double>(base);
  spec.max_intermediate_rank = max_intermediate_rank(order, tn, sliced_ids);
  spec.sliced_ids = std::move(sliced_ids);
  return spec;
}

SliceSpec select_slices(const ContractionOrder& order, const TensorNetwork& tn, int max_rank,
                        int max_sliced) {
  if (max_rank < 0) throw InvalidArgument("max_rank must be >= 0");
  const int t = tn.size();
  std::vector<IndexId> sliced;

  // Largest intermediate (elements, then rank) and where it occurs.
  struct Bottleneck {
    std::uint64_t elements = 0;
    int rank = 0;
    int step = -1;
  };
  auto bottleneck = [&](const OrderShapes& shapes) {
    Bottleneck b;
    for (std::size_t s = 0; s < shapes.step_costs.size(); ++s) {
      const int id = t + static_cast<int>(s);
      const std::uint64_t e = shapes.elements(id, tn.index_dims);
      const int r = static_cast<int>(shapes.sets[id].size());
      if (b.step < 0 || e > b.elements || (e == b.elements && r > b.rank)) {
        b = {e, r, static_cast<int>(s)};
      }
    }
    return b;
  };
  auto max_rank_of = [&](const OrderShapes& shapes) {
    int r = 0;
    for (std::size_t id = static_cast<std::size_t>(t); id < shapes.sets.size(); ++id) {
      r = std::max(r, static_cast<int>(shapes.sets[id].size()));
    }
    return r;
  };

  OrderShapes shapes = order_shapes(order, tn, sliced);
  while (max_rank_of(shapes) > max_rank) {
    const Bottleneck worst = bottleneck(shapes);
    if (static_cast<int>(sliced.size()) >= max_sliced) {
      throw InfeasibleError("reaching max rank " + std::to_string(max_rank) + " needs more than " +
                            std::to_string(max_sliced) + " sliced indices; bottleneck is step " +
                            std::to_string(worst.step) + " with rank " +
                            std::to_string(worst.rank));
    }
    // Candidates: indices of every step result above the target rank.
    std::vector<IndexId> candidates;
    for (std::size_t id = static_cast<std::size_t>(t); id < shapes.sets.size(); ++id) {
      if (static_cast<int>(shapes.sets[id].size()) > max_rank) {
        candidates.insert(candidates.end(), shapes.sets[id].begin(), shapes.sets[id].end());
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    using Score = std::tuple<std::uint64_t, int, std::uint64_t, IndexId>;
    Score best{};
    bool have = false;
    OrderShapes best_shapes;
    for (IndexId id : candidates) {
      std::vector<IndexId> trial(sliced);
      trial.push_back(id);
      OrderShapes s = order_shapes(order, tn, trial);
      const Bottleneck b = bottleneck(s);
      std::uint64_t total = 0;
      for (std::uint64_t c : s.step_costs) total += c;
      const Score score{b.elements, b.rank, total, id};
      if (!have || score < best) {
        best = score;
        best_shapes = std::move(s);
        have = true;
      }
    }
    sliced.push_back(std::get<3>(best));
    shapes = std::move(best_shapes);
  }
  return make_slice_spec(order, tn, std::move(sliced));
}

}  // namespace matnc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "matnc/error.h"
#include "test_util.h"

namespace matnc {
namespace {

using testutil::cd;

Tensor filled(std::vector<Index> idx) {
  std::size_t n = 1;
  for (const Index& i : idx) n *= static_cast<std::size_t>(i.dim);
  return Tensor(std::move(idx), std::vector<cd>(n, 1.0));
}

Index out(IndexId id, int q, std::int64_t dim = 2) { return Index{id, dim, IndexTag::kOutput, q}; }
Index in(IndexId id, std::int64_t dim = 2) { return Index{id, dim}; }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

TEST(GreedyOrder, TwoTensors) {
  TensorNetwork tn = TensorNetwork::from_tensors(
      {filled({out(0, 0), in(1)}), filled({in(1), out(2, 1)})});
  ContractionOrder o = greedy_order(tn);
  EXPECT_EQ(o.steps, (std::vector<ContractionStep>{{0, 1, 2}}));
}

TEST(GreedyOrder, MatrixChainBeatsLeftToRight) {
  // 2 x 10 x 10 x 10 x 2 chain with the end indices open.
  TensorNetwork tn = TensorNetwork::from_tensors({
      filled({out(0, 0), in(1, 10)}),
      filled({in(1, 10), in(2, 10)}),
      filled({in(2, 10), in(3, 10)}),
      filled({in(3, 10), out(4, 1)}),
  });
  ContractionOrder greedy = greedy_order(tn);
  ContractionOrder naive{4, {{0, 1, 4}, {4, 2, 5}, {5, 3, 6}}};
  EXPECT_NO_THROW(validate_order(greedy, tn));
  EXPECT_LE(single_cost(greedy, tn), single_cost(naive, tn));
  // The cheapest first pair is an end matrix with its neighbour.
  const ContractionStep& first = greedy.steps[0];
  EXPECT_TRUE((first.lhs == 0 && first.rhs == 1) || (first.lhs == 2 && first.rhs == 3) ||
              (first.lhs == 1 && first.rhs == 0) || (first.lhs == 3 && first.rhs == 2));
}

TEST(GreedyOrder, ValidOnRandomCircuits) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    TensorNetwork tn = build_tensor_network(random_circuit(8, 4, 8, seed));
    ContractionOrder o = greedy_order(tn, seed);
    EXPECT_NO_THROW(validate_order(o, tn));
    std::vector<int> used(tn.size() + o.steps.size(), 0);
    for (const ContractionStep& s : o.steps) {
      ++used[s.lhs];
      ++used[s.rhs];
    }
    for (std::size_t id = 0; id + 1 < used.size(); ++id) EXPECT_EQ(used[id], 1);
    EXPECT_EQ(greedy_order(tn, seed), o);
  }
}

TEST(GreedyOrder, DisconnectedNetwork) {
  TensorNetwork tn = TensorNetwork::from_tensors({
      filled({out(0, 0), in(1)}),
      filled({in(1)}),
      filled({out(2, 1)}),
  });
  ContractionOrder o = greedy_order(tn);
  EXPECT_NO_THROW(validate_order(o, tn));
}

TEST(AnnealOrder, ZeroBudgetReturnsInit) {
  TensorNetwork tn = build_tensor_network(random_circuit(8, 4, 6, 1));
  ContractionOrder init = greedy_order(tn);
  SearchConfig cfg;
  cfg.loss = Loss::kSingle;
  cfg.budget = 0;
  SearchResult r = anneal_order(tn, init, cfg);
  EXPECT_EQ(r.order, init);
  EXPECT_EQ(r.report.single_cost, single_cost(init, tn));
}

TEST(AnnealOrder, ImprovesAndIsDeterministic) {
  TensorNetwork tn = build_tensor_network(random_circuit(10, 5, 8, 2));
  std::vector<Bitstring> bs = random_bitstrings(10, 64, 5, false);
  ContractionOrder init = greedy_order(tn);
  SearchConfig cfg;
  cfg.budget = 4000;
  cfg.seed = 9;
  SearchResult a = anneal_order(tn, init, cfg, bs);
  SearchResult b = anneal_order(tn, init, cfg, bs);
  EXPECT_EQ(a.order, b.order);
  EXPECT_LE(a.best_loss, a.initial_loss);
  EXPECT_NO_THROW(validate_order(a.order, tn));
  EXPECT_DOUBLE_EQ(a.best_loss, order_loss(a.order, tn, cfg, bs));
  EXPECT_DOUBLE_EQ(a.initial_loss, order_loss(init, tn, cfg, bs));
  BlockPartition p = partition_blocks(a.order, tn);
  EXPECT_EQ(a.report.multi_cost, multi_cost(p, layer_widths(p, bs)));
  EXPECT_GT(a.accepted_moves, 0u);
}

TEST(AnnealOrder, MultiWithOneBitstringEqualsSingle) {
  TensorNetwork tn = build_tensor_network(random_circuit(9, 3, 6, 3));
  ContractionOrder init = greedy_order(tn);
  std::vector<Bitstring> one = random_bitstrings(9, 1, 1, false);
  SearchConfig single;
  single.loss = Loss::kSingle;
  single.budget = 2000;
  single.seed = 4;
  SearchConfig multi = single;
  multi.loss = Loss::kMulti;
  SearchResult a = anneal_order(tn, init, single);
  SearchResult b = anneal_order(tn, init, multi, one);
  EXPECT_EQ(a.order, b.order);
  EXPECT_EQ(a.accepted_moves, b.accepted_moves);
}

TEST(AnnealOrder, ErrorsAndExpectedWidths) {
  TensorNetwork tn = build_tensor_network(random_circuit(6, 3, 4, 3));
  ContractionOrder init = greedy_order(tn);
  SearchConfig cfg;
  cfg.budget = 10;
  EXPECT_THROW(anneal_order(tn, init, cfg), InvalidArgument);
  cfg.widths_source = WidthsSource::kExpected;
  cfg.expected_k = 20;
  SearchResult r = anneal_order(tn, init, cfg);
  EXPECT_EQ(r.report.k, 20u);
  cfg.decay = 1.5;
  EXPECT_THROW(anneal_order(tn, init, cfg), InvalidArgument);
}

TEST(AnnealOrder, MultiLossWinsOnItsOwnObjective) {
  TensorNetwork tn = build_tensor_network(random_circuit(10, 5, 8, 11));
  std::vector<Bitstring> bs = random_bitstrings(10, 512, 12, false);
  ContractionOrder init = greedy_order(tn);
  std::vector<double> multi, single;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SearchConfig cfg;
    cfg.budget = 20000;
    cfg.seed = seed;
    multi.push_back(static_cast<double>(anneal_order(tn, init, cfg, bs).report.multi_cost));
    cfg.loss = Loss::kSingle;
    ContractionOrder o = anneal_order(tn, init, cfg).order;
    BlockPartition p = partition_blocks(o, tn);
    single.push_back(static_cast<double>(multi_cost(p, layer_widths(p, bs))));
  }
  EXPECT_LE(median(multi), median(single));
}

TEST(SelectSlices, AlreadyWithinBound) {
  TensorNetwork tn = build_tensor_network(random_circuit(8, 4, 6, 1));
  ContractionOrder o = greedy_order(tn);
  int r = max_intermediate_rank(o, tn);
  SliceSpec s = select_slices(o, tn, r);
  EXPECT_TRUE(s.sliced_ids.empty());
  EXPECT_EQ(s.n_slices, 1u);
  EXPECT_DOUBLE_EQ(s.overhead, 1.0);
  EXPECT_EQ(s.max_intermediate_rank, r);
}

TEST(SelectSlices, OneOversizedIntermediate) {
  TensorNetwork tn = TensorNetwork::from_tensors({
      filled({in(0), in(1), in(2)}),
      filled({in(2), in(3)}),
      filled({in(0), in(1), in(3), out(4, 0)}),
  });
  ContractionOrder o{3, {{0, 1, 3}, {3, 2, 4}}};
  EXPECT_EQ(max_intermediate_rank(o, tn), 3);
  SliceSpec s = select_slices(o, tn, 2);
  EXPECT_EQ(s.sliced_ids.size(), 1u);
  EXPECT_EQ(s.n_slices, 2u);
  EXPECT_EQ(s.max_intermediate_rank, 2);
  EXPECT_THROW(select_slices(o, tn, 0, 1), InfeasibleError);
}

TEST(SelectSlices, RankBoundHoldsOnReplay) {
  TensorNetwork tn = build_tensor_network(random_circuit(12, 4, 10, 5));
  ContractionOrder o = greedy_order(tn);
  const int target = std::max(2, max_intermediate_rank(o, tn) - 3);
  SliceSpec s = select_slices(o, tn, target);
  EXPECT_GE(s.sliced_ids.size(), 1u);
  EXPECT_EQ(s.n_slices, std::uint64_t{1} << s.sliced_ids.size());
  EXPECT_GE(s.overhead, 1.0);
  std::set<IndexId> sliced(s.sliced_ids.begin(), s.sliced_ids.end());
  for (int r : testutil::replay_result_ranks(o, tn, sliced)) EXPECT_LE(r, target);
  for (IndexId id : s.sliced_ids) {
    for (const Index& ix : tn.open_outputs) EXPECT_NE(ix.id, id);
  }
}

TEST(MakeSliceSpec, Validates) {
  TensorNetwork tn = build_tensor_network(random_circuit(4, 2, 3, 5));
  ContractionOrder o = greedy_order(tn);
  EXPECT_THROW(make_slice_spec(o, tn, {tn.open_outputs[0].id}), InvalidArgument);
  EXPECT_THROW(make_slice_spec(o, tn, {100000}), InvalidArgument);
  EXPECT_THROW(make_slice_spec(o, tn, {0, 0}), InvalidArgument);
  SliceSpec none = make_slice_spec(o, tn, {});
  EXPECT_EQ(none.n_slices, 1u);
}

}  // namespace
}  // namespace matnc

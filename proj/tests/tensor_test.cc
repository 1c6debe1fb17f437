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

#include "matnc/tensor.h"

#include <gtest/gtest.h>

#include "matnc/error.h"
#include "matnc/rng.h"
#include "test_util.h"

namespace matnc {
namespace {

using testutil::brute_force_contract;
using testutil::cd;
using testutil::max_abs_diff;
using testutil::random_tensor;

Index ix(IndexId id, std::int64_t dim = 2) { return Index{id, dim}; }

TEST(ContractPair, IdentityTimesVector) {
  Tensor eye({ix(0), ix(1)}, {1, 0, 0, 1});
  Tensor v({ix(1)}, {cd(3, 1), cd(-2, 0.5)});
  Tensor r = contract_pair(eye, v);
  ASSERT_EQ(r.rank(), 1u);
  EXPECT_EQ(r.indices()[0].id, 0);
  EXPECT_EQ(r.data()[0], cd(3, 1));
  EXPECT_EQ(r.data()[1], cd(-2, 0.5));
}

TEST(ContractPair, DotProduct) {
  Tensor a({ix(5)}, {1, 2});
  Tensor b({ix(5)}, {3, 4});
  std::uint64_t mults = 0;
  Tensor r = contract_pair(a, b, kDefaultMaxElements, &mults);
  EXPECT_EQ(r.rank(), 0u);
  EXPECT_EQ(r.value(), cd(11, 0));
  EXPECT_EQ(mults, 2u);
}

TEST(ContractPair, RankThreeTimesRankTwoMatchesTripleLoop) {
  Rng rng(11);
  Tensor a = random_tensor({ix(0), ix(1), ix(2)}, rng);
  Tensor b = random_tensor({ix(1), ix(3)}, rng);
  Tensor r = contract_pair(a, b);
  ASSERT_EQ(r.size(), 8u);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        cd acc = 0;
        for (int j = 0; j < 2; ++j) acc += a.data()[4 * i + 2 * j + k] * b.data()[2 * j + l];
        EXPECT_LT(std::abs(r.data()[4 * i + 2 * k + l] - acc), 1e-12);
      }
    }
  }
}

TEST(ContractPair, MatchesBruteForceUpToTotalRankEight) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    int ra = static_cast<int>(rng.below(6));
    int rb = static_cast<int>(rng.below(static_cast<std::uint64_t>(9 - ra)));
    int shared = ra == 0 || rb == 0 ? 0 : static_cast<int>(rng.below(std::min(ra, rb) + 1));
    std::vector<IndexId> ids_a, ids_b;
    IndexId next = 0;
    for (int i = 0; i < ra; ++i) ids_a.push_back(next++);
    for (int i = 0; i < rb - shared; ++i) ids_b.push_back(next++);
    for (int i = 0; i < shared; ++i) ids_b.push_back(ids_a[i]);
    // Shuffle axis orders so shared axes are not aligned.
    for (std::size_t i = ids_a.size(); i > 1; --i) std::swap(ids_a[i - 1], ids_a[rng.below(i)]);
    for (std::size_t i = ids_b.size(); i > 1; --i) std::swap(ids_b[i - 1], ids_b[rng.below(i)]);
    std::vector<std::int64_t> dims(next);
    for (auto& d : dims) d = 1 + static_cast<std::int64_t>(rng.below(3));
    std::vector<Index> ia, ib;
    for (IndexId id : ids_a) ia.push_back(ix(id, dims[id]));
    for (IndexId id : ids_b) ib.push_back(ix(id, dims[id]));
    Tensor a = random_tensor(ia, rng), b = random_tensor(ib, rng);
    Tensor ref = brute_force_contract(a, b);
    std::uint64_t mults = 0;
    Tensor got = contract_pair(a, b, kDefaultMaxElements, &mults);
    ASSERT_EQ(got.indices(), ref.indices()) << "trial " << trial;
    EXPECT_LT(max_abs_diff(got.data(), ref.data()), 1e-12) << "trial " << trial;
    std::uint64_t expect = 1;
    for (std::int64_t d : dims) expect *= static_cast<std::uint64_t>(d);
    EXPECT_EQ(mults, expect);
    EXPECT_EQ(mults, pair_cost(a.indices(), b.indices()));
  }
}

TEST(ContractPair, SinglePrecisionAgrees) {
  Rng rng(5);
  Tensor a = random_tensor({ix(0), ix(1), ix(2), ix(3)}, rng);
  Tensor b = random_tensor({ix(2), ix(4), ix(0)}, rng);
  Tensor ref = contract_pair(a, b);
  TensorF got = contract_pair(a.cast<float>(), b.cast<float>());
  Tensor back = got.cast<double>();
  EXPECT_LT(max_abs_diff(back.data(), ref.data()), 1e-5);
}

TEST(ContractPair, IsBilinear) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor a = random_tensor({ix(0), ix(1), ix(2)}, rng);
    Tensor b = random_tensor({ix(2), ix(3)}, rng);
    cd alpha = testutil::random_complex(rng);
    Tensor lhs = contract_pair(a.scaled(alpha), b);
    Tensor rhs = contract_pair(a, b).scaled(alpha);
    EXPECT_LT(max_abs_diff(lhs.data(), rhs.data()), 1e-12);
  }
}

TEST(ContractPair, Errors) {
  Tensor a({ix(0, 2)}, {1, 2});
  Tensor b({ix(0, 3)}, {1, 2, 3});
  EXPECT_THROW(contract_pair(a, b), ContractError);
  Rng rng(1);
  Tensor big1 = random_tensor({ix(0), ix(1), ix(2)}, rng);
  Tensor big2 = random_tensor({ix(3), ix(4)}, rng);
  EXPECT_THROW(contract_pair(big1, big2, 16), CapacityError);
  EXPECT_NO_THROW(contract_pair(big1, big2, 32));
}

TEST(Tensor, ConstructorValidates) {
  EXPECT_THROW(Tensor({ix(0), ix(0)}, std::vector<cd>(4)), InvalidArgument);
  EXPECT_THROW(Tensor({ix(0)}, std::vector<cd>(3)), InvalidArgument);
  EXPECT_THROW(Tensor({ix(0, 0)}, {}), InvalidArgument);
  Tensor s;
  EXPECT_EQ(s.rank(), 0u);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.value(), cd(0));
}

TEST(FixIndex, Basics) {
  Tensor v({ix(3)}, {cd(7, 1), cd(9, 0)});
  Tensor s = fix_index(v, 3, 0);
  EXPECT_EQ(s.rank(), 0u);
  EXPECT_EQ(s.value(), cd(7, 1));
  Tensor eye({ix(0), ix(1)}, {1, 0, 0, 1});
  Tensor row = fix_index(eye, 0, 1);
  ASSERT_EQ(row.size(), 2u);
  EXPECT_EQ(row.data()[0], cd(0));
  EXPECT_EQ(row.data()[1], cd(1));
  EXPECT_THROW(fix_index(eye, 7, 0), IndexError);
  EXPECT_THROW(fix_index(eye, 0, 2), IndexError);
}

TEST(FixIndex, EveryIndexGivesFlatElement) {
  Rng rng(3);
  Tensor t = random_tensor({ix(4), ix(1), ix(9), ix(2)}, rng);
  for (int bits = 0; bits < 16; ++bits) {
    Tensor r = t;
    for (int p = 0; p < 4; ++p) r = fix_index(r, t.indices()[p].id, (bits >> (3 - p)) & 1);
    EXPECT_EQ(r.value(), t.data()[bits]);
  }
}

TEST(FixIndex, CommutesWithContraction) {
  Rng rng(4);
  Tensor a = random_tensor({ix(0), ix(1), ix(2)}, rng);
  Tensor b = random_tensor({ix(1), ix(3)}, rng);
  for (int v = 0; v < 2; ++v) {
    Tensor lhs = fix_index(contract_pair(a, b), 2, v);
    Tensor rhs = contract_pair(fix_index(a, 2, v), b);
    EXPECT_LT(max_abs_diff(lhs.data(), rhs.data()), 1e-12);
  }
}

TEST(PairCost, Examples) {
  std::vector<Index> m1{ix(0), ix(1)}, m2{ix(1), ix(2)};
  EXPECT_EQ(pair_cost(m1, m2), 8u);
  std::vector<Index> v1{ix(0)}, v2{ix(1)};
  EXPECT_EQ(pair_cost(v1, v2), 4u);
  std::vector<Index> a, b;
  for (int i = 0; i < 20; ++i) a.push_back(ix(i));
  for (int i = 14; i < 22; ++i) b.push_back(ix(i));
  EXPECT_EQ(pair_cost(a, b), std::uint64_t{1} << 22);
  EXPECT_EQ(pair_cost(a, b), pair_cost(b, a));
  std::vector<IndexId> ida{0, 1, 2}, idb{2, 3};
  std::vector<std::int64_t> dims{2, 3, 2, 5};
  EXPECT_EQ(pair_cost(ida, idb, dims), 60u);
  EXPECT_EQ(pair_cost(idb, ida, dims), 60u);
}

TEST(PermuteAxes, MatchesDirectIndexing) {
  std::vector<cd> data(24);
  for (int i = 0; i < 24; ++i) data[i] = cd(i, -i);
  std::vector<std::int64_t> dims{2, 3, 4};
  std::vector<int> perm{2, 0, 1};
  std::vector<cd> out = permute_axes<cd>(data, dims, perm);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 4; ++c) {
        EXPECT_EQ(out[(c * 2 + a) * 3 + b], data[(a * 3 + b) * 4 + c]);
      }
    }
  }
}

}  // namespace
}  // namespace matnc

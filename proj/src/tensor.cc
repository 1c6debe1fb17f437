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

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Core>

#include "matnc/error.h"

namespace matnc {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw InvalidArgument("contraction cost overflows 64 bits");
  }
  return out;
}

}  // namespace

template <typename Real>
BasicTensor<Real>::BasicTensor(std::vector<Index> indices,
                               std::vector<Scalar> data)
    : indices_(std::move(indices)), data_(std::move(data)) {
  std::uint64_t expected = 1;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i].dim < 1) {
      throw InvalidArgument("index " + std::to_string(indices_[i].id) +
                            " has dim < 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (indices_[j].id == indices_[i].id) {
        throw InvalidArgument("index id " + std::to_string(indices_[i].id) +
                              " repeated within one tensor");
      }
    }
    expected = checked_mul(expected, static_cast<std::uint64_t>(indices_[i].dim));
  }
  if (data_.size() != expected) {
    throw InvalidArgument("tensor data length " + std::to_string(data_.size()) +
                          " does not match shape (" + std::to_string(expected) +
                          " elements)");
  }
}

template <typename Real>
BasicTensor<Real> BasicTensor<Real>::scalar(Scalar value) {
  return BasicTensor({}, {value});
}

template <typename Real>
int BasicTensor<Real>::position(IndexId id) const {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

template <typename Real>
const typename BasicTensor<Real>::Scalar& BasicTensor<Real>::at(
    std::span<const std::int64_t> multi_index) const {
  if (multi_index.size() != indices_.size()) {
    throw IndexError("multi-index has " + std::to_string(multi_index.size()) +
                     " entries, tensor has rank " +
                     std::to_string(indices_.size()));
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (multi_index[i] < 0 || multi_index[i] >= indices_[i].dim) {
      throw IndexError("value " + std::to_string(multi_index[i]) +
                       " out of range for index " +
                       std::to_string(indices_[i].id));
    }
    flat = flat * static_cast<std::size_t>(indices_[i].dim) +
           static_cast<std::size_t>(multi_index[i]);
  }
  return data_[flat];
}

template <typename Real>
BasicTensor<Real> BasicTensor<Real>::scaled(Scalar alpha) const {
  std::vector<Scalar> out(data_);
  for (auto& v : out) v *= alpha;
  return BasicTensor(indices_, std::move(out));
}

template <typename Scalar>
std::vector<Scalar> permute_axes(std::span<const Scalar> data,
                                 std::span<const std::int64_t> dims,
                                 std::span<const int> perm) {
  const std::size_t rank = dims.size();
  bool identity = true;
  for (std::size_t i = 0; i < rank; ++i) identity &= perm[i] == static_cast<int>(i);
  if (identity || data.size() <= 1) return {data.begin(), data.end()};

  std::vector<std::int64_t> in_stride(rank, 1);
  for (std::size_t i = rank - 1; i > 0; --i) in_stride[i - 1] = in_stride[i] * dims[i];
  std::vector<std::int64_t> out_dim(rank), stride(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    out_dim[i] = dims[perm[i]];
    stride[i] = in_stride[perm[i]];
  }

  std::vector<Scalar> out(data.size());
  const std::int64_t inner = out_dim[rank - 1];
  const std::int64_t inner_stride = stride[rank - 1];
  std::vector<std::int64_t> counter(rank, 0);
  std::int64_t offset = 0;
  for (std::size_t pos = 0; pos < out.size(); pos += inner) {
    const Scalar* src = data.data() + offset;
    Scalar* dst = out.data() + pos;
    for (std::int64_t j = 0; j < inner; ++j) dst[j] = src[j * inner_stride];
    // Advance the odometer over the outer axes.
    for (std::size_t ax = rank - 1; ax-- > 0;) {
      offset += stride[ax];
      if (++counter[ax] < out_dim[ax]) break;
      offset -= stride[ax] * out_dim[ax];
      counter[ax] = 0;
    }
  }
  return out;
}

template <typename Real>
BasicTensor<Real> contract_pair(const BasicTensor<Real>& a,
                                const BasicTensor<Real>& b,
                                std::size_t max_elements,
                                std::uint64_t* multiplications) {
  using Scalar = std::complex<Real>;
  const auto& ai = a.indices();
  const auto& bi = b.indices();

  // Axis bookkeeping: a -> [free_a..., shared...], b -> [shared..., free_b...].
  std::vector<int> a_free, a_shared, b_shared, b_free;
  std::vector<bool> b_is_shared(bi.size(), false);
  for (std::size_t i = 0; i < ai.size(); ++i) {
    const int j = b.position(ai[i].id);
    if (j < 0) {
      a_free.push_back(static_cast<int>(i));
      continue;
    }
    if (bi[j].dim != ai[i].dim) {
      throw ContractError("shared index " + std::to_string(ai[i].id) +
                          " has dim " + std::to_string(ai[i].dim) + " vs " +
                          std::to_string(bi[j].dim));
    }
    a_shared.push_back(static_cast<int>(i));
    b_shared.push_back(j);
    b_is_shared[j] = true;
  }
  for (std::size_t j = 0; j < bi.size(); ++j) {
    if (!b_is_shared[j]) b_free.push_back(static_cast<int>(j));
  }

  std::int64_t m = 1, k = 1, n = 1;
  for (int i : a_free) m *= ai[i].dim;
  for (int i : a_shared) k *= ai[i].dim;
  for (int j : b_free) n *= bi[j].dim;
  const std::uint64_t out_elements =
      checked_mul(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n));
  if (out_elements > max_elements) {
    throw CapacityError("contraction result of " + std::to_string(out_elements) +
                        " elements exceeds the cap of " +
                        std::to_string(max_elements) +
                        "; slice more indices to bound intermediate size");
  }

  std::vector<Index> out_indices;
  out_indices.reserve(a_free.size() + b_free.size());
  for (int i : a_free) out_indices.push_back(ai[i]);
  for (int j : b_free) out_indices.push_back(bi[j]);

  std::vector<std::int64_t> a_dims(ai.size()), b_dims(bi.size());
  for (std::size_t i = 0; i < ai.size(); ++i) a_dims[i] = ai[i].dim;
  for (std::size_t j = 0; j < bi.size(); ++j) b_dims[j] = bi[j].dim;
  std::vector<int> a_perm(a_free);
  a_perm.insert(a_perm.end(), a_shared.begin(), a_shared.end());
  std::vector<int> b_perm(b_shared);
  b_perm.insert(b_perm.end(), b_free.begin(), b_free.end());

  const std::vector<Scalar> a_mat = permute_axes<Scalar>(a.data(), a_dims, a_perm);
  const std::vector<Scalar> b_mat = permute_axes<Scalar>(b.data(), b_dims, b_perm);
  std::vector<Scalar> c_mat(out_elements);

  using RowMajor =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> lhs(a_mat.data(), m, k);
  Eigen::Map<const RowMajor> rhs(b_mat.data(), k, n);
  Eigen::Map<RowMajor> out(c_mat.data(), m, n);
  out.noalias() = lhs * rhs;

  if (multiplications != nullptr) {
    *multiplications += checked_mul(out_elements, static_cast<std::uint64_t>(k));
  }
  return BasicTensor<Real>(std::move(out_indices), std::move(c_mat));
}

template <typename Real>
BasicTensor<Real> fix_index(const BasicTensor<Real>& t, IndexId id,
                            std::int64_t value) {
  const int p = t.position(id);
  if (p < 0) {
    throw IndexError("index " + std::to_string(id) + " is not on the tensor");
  }
  const auto& idx = t.indices();
  if (value < 0 || value >= idx[p].dim) {
    throw IndexError("value " + std::to_string(value) + " out of range for index " +
                     std::to_string(id));
  }
  std::int64_t outer = 1, inner = 1;
  for (int i = 0; i < p; ++i) outer *= idx[i].dim;
  for (std::size_t i = p + 1; i < idx.size(); ++i) inner *= idx[i].dim;
  const std::int64_t dim = idx[p].dim;

  std::vector<std::complex<Real>> out(static_cast<std::size_t>(outer * inner));
  const auto data = t.data();
  for (std::int64_t o = 0; o < outer; ++o) {
    const auto* src = data.data() + (o * dim + value) * inner;
    std::copy(src, src + inner, out.begin() + o * inner);
  }
  std::vector<Index> out_indices(idx);
  out_indices.erase(out_indices.begin() + p);
  return BasicTensor<Real>(std::move(out_indices), std::move(out));
}

std::uint64_t pair_cost(std::span<const Index> a, std::span<const Index> b) {
  std::uint64_t cost = 1;
  for (const auto& x : a) cost = checked_mul(cost, static_cast<std::uint64_t>(x.dim));
  for (const auto& y : b) {
    const bool shared = std::any_of(a.begin(), a.end(),
                                    [&](const Index& x) { return x.id == y.id; });
    if (!shared) cost = checked_mul(cost, static_cast<std::uint64_t>(y.dim));
  }
  return cost;
}

std::uint64_t pair_cost(std::span<const IndexId> a, std::span<const IndexId> b,
                        std::span<const std::int64_t> dim_of) {
  std::uint64_t cost = 1;
  for (IndexId x : a) cost = checked_mul(cost, static_cast<std::uint64_t>(dim_of[x]));
  for (IndexId y : b) {
    if (std::find(a.begin(), a.end(), y) == a.end()) {
      cost = checked_mul(cost, static_cast<std::uint64_t>(dim_of[y]));
    }
  }
  return cost;
}

template class BasicTensor<double>;
template class BasicTensor<float>;
template BasicTensor<double> contract_pair(const BasicTensor<double>&,
                                           const BasicTensor<double>&,
                                           std::size_t, std::uint64_t*);
template BasicTensor<float> contract_pair(const BasicTensor<float>&,
                                          const BasicTensor<float>&, std::size_t,
                                          std::uint64_t*);
template BasicTensor<double> fix_index(const BasicTensor<double>&, IndexId,
                                       std::int64_t);
template BasicTensor<float> fix_index(const BasicTensor<float>&, IndexId,
                                      std::int64_t);
template std::vector<std::complex<double>> permute_axes(
    std::span<const std::complex<double>>, std::span<const std::int64_t>,
    std::span<const int>);
template std::vector<std::complex<float>> permute_axes(
    std::span<const std::complex<float>>, std::span<const std::int64_t>,
    std::span<const int>);

}  // namespace matnc

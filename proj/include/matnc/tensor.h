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

#ifndef MATNC_TENSOR_H_
#define MATNC_TENSOR_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace matnc {

using IndexId = std::int32_t;

enum class IndexTag : std::uint8_t { kInternal, kInput, kOutput };

struct Index {
  IndexId id = 0;
  std::int64_t dim = 2;
  IndexTag tag = IndexTag::kInternal;
  // Qubit the index belongs to when tagged input or output, else -1.
  int qubit = -1;

  friend bool operator==(const Index&, const Index&) = default;
};

inline constexpr std::size_t kDefaultMaxElements = std::size_t{1} << 28;

// Dense complex tensor. Data is row-major in the order of `indices()`: the
// last index varies fastest. A rank-0 tensor holds exactly one element.
template <typename Real>
class BasicTensor {
 public:
  using Scalar = std::complex<Real>;

  // Scalar zero.
  BasicTensor() : data_(1) {}

  // Throws InvalidArgument when ids repeat, a dim is < 1, or the data
  // length does not equal the product of dims.
  BasicTensor(std::vector<Index> indices, std::vector<Scalar> data);

  static BasicTensor scalar(Scalar value);

  const std::vector<Index>& indices() const { return indices_; }
  std::span<const Scalar> data() const { return data_; }
  std::size_t rank() const { return indices_.size(); }
  std::size_t size() const { return data_.size(); }

  // Position of `id` in indices(), or -1.
  int position(IndexId id) const;
  bool has_index(IndexId id) const { return position(id) >= 0; }

  // Element at a full multi-index given in indices() order.
  const Scalar& at(std::span<const std::int64_t> multi_index) const;

  // Value of a rank-0 tensor.
  Scalar value() const { return data_.front(); }

  BasicTensor scaled(Scalar alpha) const;

  template <typename OtherReal>
  BasicTensor<OtherReal> cast() const {
    std::vector<std::complex<OtherReal>> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
      out[i] = std::complex<OtherReal>(static_cast<OtherReal>(data_[i].real()),
                                       static_cast<OtherReal>(data_[i].imag()));
    }
    return BasicTensor<OtherReal>(indices_, std::move(out));
  }

 private:
  std::vector<Index> indices_;
  std::vector<Scalar> data_;
};

using Tensor = BasicTensor<double>;
using TensorF = BasicTensor<float>;

// Contracts every index id shared by `a` and `b`. The result carries a's
// unshared indices in order followed by b's unshared indices in order.
// `multiplications`, when given, is incremented by the scalar
// multiplications performed (product of dims over the index union).
// Throws ContractError on a dim mismatch and CapacityError when the result
// would hold more than `max_elements` elements.
template <typename Real>
BasicTensor<Real> contract_pair(const BasicTensor<Real>& a,
                                const BasicTensor<Real>& b,
                                std::size_t max_elements = kDefaultMaxElements,
                                std::uint64_t* multiplications = nullptr);

// Slice of `t` at `id` = `value`, with `id` removed. Throws IndexError.
template <typename Real>
BasicTensor<Real> fix_index(const BasicTensor<Real>& t, IndexId id,
                            std::int64_t value);

// Scalar multiplications needed to contract tensors with these index sets:
// the product of dims over the union of ids.
std::uint64_t pair_cost(std::span<const Index> a, std::span<const Index> b);

// Same, with each index set given as ids and a dim lookup by id.
std::uint64_t pair_cost(std::span<const IndexId> a, std::span<const IndexId> b,
                        std::span<const std::int64_t> dim_of);

// Permutes the axes of a row-major array: output axis i is input axis
// perm[i].
template <typename Scalar>
std::vector<Scalar> permute_axes(std::span<const Scalar> data,
                                 std::span<const std::int64_t> dims,
                                 std::span<const int> perm);

}  // namespace matnc

#endif  // MATNC_TENSOR_H_

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

#ifndef MATNC_EXECUTOR_H_
#define MATNC_EXECUTOR_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "matnc/bitstring.h"
#include "matnc/circuit.h"
#include "matnc/cost_model.h"
#include "matnc/reuse_plan.h"
#include "matnc/tensor.h"

namespace matnc {

enum class Precision { kDouble, kSingle };

struct ExecOptions {
  // Largest intermediate tensor allowed, in elements.
  std::size_t max_elements = kDefaultMaxElements;
  Precision precision = Precision::kDouble;
};

struct Instrumentation {
  std::uint64_t multiplications = 0;
  // Largest number of step-result elements alive at once within one task.
  std::uint64_t peak_live_elements = 0;
  // Largest rank of any step result that was materialized.
  int max_result_rank = 0;
  std::uint64_t n_slices = 1;
};

struct AmplitudeEntry {
  Bitstring bitstring;
  std::complex<double> amplitude;
  double p = 0;
};

struct AmplitudeSet {
  int n_qubits = 0;
  // One entry per requested bitstring, in request order.
  std::vector<AmplitudeEntry> entries;
  std::uint64_t fingerprint = 0;
  Instrumentation stats;
};

// Slice assignment `slice` of the given ids, mixed radix with the last id
// varying fastest.
std::vector<std::int64_t> slice_values(std::span<const IndexId> sliced,
                                       std::span<const std::int64_t> index_dims,
                                       std::uint64_t slice);

// Number of slice assignments of `sliced`.
std::uint64_t slice_count(std::span<const IndexId> sliced,
                          std::span<const std::int64_t> index_dims);

// Amplitude of one bitstring by replaying `order` with every output fixed,
// summed over all assignments of `sliced` in ascending slice order.
// Throws CapacityError when an intermediate exceeds the cap.
std::complex<double> run_single(const TensorNetwork& tn, const ContractionOrder& order,
                                const Bitstring& bitstring,
                                std::span<const IndexId> sliced = {},
                                const ExecOptions& options = {},
                                Instrumentation* stats = nullptr);

// Depth-first traversal of the reuse tree once per slice assignment.
// Throws MismatchError when the tree does not match the order.
AmplitudeSet run_multi(const TensorNetwork& tn, const ContractionOrder& order,
                       const ReuseTree& tree, std::span<const IndexId> sliced = {},
                       const ExecOptions& options = {});

// run_multi spread over `workers` threads: one task per slice when there
// are several slices, otherwise one task per subtree. Results are
// bit-identical for every worker count. A failing task is rethrown as
// RunError naming its slice.
AmplitudeSet run_parallel(const TensorNetwork& tn, const ContractionOrder& order,
                          const ReuseTree& tree, std::span<const IndexId> sliced,
                          int workers, const ExecOptions& options = {});

}  // namespace matnc

#endif  // MATNC_EXECUTOR_H_

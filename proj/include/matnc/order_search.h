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

#ifndef MATNC_ORDER_SEARCH_H_
#define MATNC_ORDER_SEARCH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "matnc/bitstring.h"
#include "matnc/circuit.h"
#include "matnc/cost_model.h"

namespace matnc {

enum class Loss {
  kSingle,  // multiplications of one amplitude
  kMulti,   // multiplications of all amplitudes with prefix reuse
};

enum class WidthsSource {
  kExact,     // prefix counts of the supplied bitstrings
  kExpected,  // expected_widths(expected_k, n)
};

struct SearchConfig {
  Loss loss = Loss::kMulti;
  WidthsSource widths_source = WidthsSource::kExact;
  std::uint64_t expected_k = 1;
  // Number of proposed moves.
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  // Initial temperature as a fraction of the initial loss.
  double initial_temperature = 0.02;
  // Temperature multiplier applied after every proposal; in (0, 1).
  double decay = 0.999;
};

struct SearchResult {
  ContractionOrder order;
  CostReport report;
  double initial_loss = 0;
  double best_loss = 0;
  std::uint64_t accepted_moves = 0;
};

// Repeatedly contracts the connected pair with the fewest multiplications
// (outputs counted as fixed). Ties go to the smaller result rank, then to
// the lower tensor ids; a nonzero seed reshuffles ties deterministically.
// Disconnected remainders are joined smallest-first.
ContractionOrder greedy_order(const TensorNetwork& tn, std::uint64_t seed = 0);

// Widths used to score orders under `config`; all ones for the single loss
// or when exact widths are requested without bitstrings.
LayerWidths search_widths(std::span<const int> layer_order, const SearchConfig& config,
                          std::span<const Bitstring> bitstrings);

// Loss of an order as the annealer scores it.
double order_loss(const ContractionOrder& order, const TensorNetwork& tn,
                  const SearchConfig& config, std::span<const Bitstring> bitstrings);

// Simulated annealing over contraction trees starting from `init`.
//
// Moves are subtree rotations, leaf reattachments next to a neighbouring
// tensor, and swaps of the priority that decides which of two ready bright
// tensors is consumed first. Proposals that would contract two non-scalar
// tensors without a shared index are rejected. Each tree is scored in a
// canonical linear order that runs every step as soon as its operands
// exist, consuming bright tensors only when nothing else is ready. Uphill
// moves are accepted with probability exp(-delta / T). Returns the best
// order seen (`init` itself if nothing beat it) and its CostReport under the
// configured widths. Throws InvalidArgument when the multi loss needs exact
// widths and no bitstrings are given.
SearchResult anneal_order(const TensorNetwork& tn, const ContractionOrder& init,
                          const SearchConfig& config,
                          std::span<const Bitstring> bitstrings = {});

struct SliceSpec {
  std::vector<IndexId> sliced_ids;
  std::uint64_t n_slices = 1;
  // (sliced single cost * n_slices) / unsliced single cost.
  double overhead = 1.0;
  // Largest intermediate rank once the ids are fixed.
  int max_intermediate_rank = 0;
};

// Largest rank among the step results of `order` with `sliced` fixed.
int max_intermediate_rank(const ContractionOrder& order, const TensorNetwork& tn,
                          std::span<const IndexId> sliced = {});

// Greedily fixes internal indices, each time the one that most shrinks the
// largest intermediate, until every intermediate has rank <= max_rank.
// Throws InfeasibleError, naming the bottleneck step, when more than
// `max_sliced` indices would be needed.
SliceSpec select_slices(const ContractionOrder& order, const TensorNetwork& tn,
                        int max_rank, int max_sliced = 32);

// Slice spec for a fixed list of ids (validated as internal indices).
SliceSpec make_slice_spec(const ContractionOrder& order, const TensorNetwork& tn,
                          std::vector<IndexId> sliced_ids);

}  // namespace matnc

#endif  // MATNC_ORDER_SEARCH_H_

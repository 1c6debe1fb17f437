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

#include "matnc/cost_model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "matnc/error.h"

namespace matnc {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw InvalidArgument("cost overflows 64 bits");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw InvalidArgument("cost overflows 64 bits");
  return out;
}

std::vector<IndexId> symmetric_difference(const std::vector<IndexId>& a,
                                          const std::vector<IndexId>& b) {
  std::vector<IndexId> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

}  // namespace

void validate_order(const ContractionOrder& order, const TensorNetwork& tn) {
  const int t = tn.size();
  if (order.num_tensors != t) {
    throw MismatchError("order is for " + std::to_string(order.num_tensors) +
                        " tensors, network has " + std::to_string(t));
  }
  if (t == 0) throw MismatchError("network has no tensors");
  if (static_cast<int>(order.steps.size()) != t - 1) {
    throw MismatchError("order has " + std::to_string(order.steps.size()) +
                        " steps, expected " + std::to_string(t - 1));
  }
  std::vector<char> consumed(static_cast<std::size_t>(2 * t - 1), 0);
  for (int s = 0; s < t - 1; ++s) {
    const ContractionStep& st = order.steps[s];
    const int limit = t + s;
    if (st.result != limit) {
      throw MismatchError("step " + std::to_string(s) + " must produce id " +
                          std::to_string(limit));
    }
    for (int operand : {st.lhs, st.rhs}) {
      if (operand < 0 || operand >= limit) {
        throw MismatchError("step " + std::to_string(s) + " uses unknown tensor " +
                            std::to_string(operand));
      }
      if (consumed[operand]) {
        throw MismatchError("step " + std::to_string(s) + " reuses tensor " +
                            std::to_string(operand));
      }
      consumed[operand] = 1;
    }
    if (st.lhs == st.rhs) {
      throw MismatchError("step " + std::to_string(s) + " contracts a tensor with itself");
    }
  }
}

std::uint64_t OrderShapes::elements(int id, std::span<const std::int64_t> dims) const {
  std::uint64_t e = 1;
  for (IndexId i : sets[id]) e = checked_mul(e, static_cast<std::uint64_t>(dims[i]));
  return e;
}

OrderShapes order_shapes(const ContractionOrder& order, const TensorNetwork& tn,
                         std::span<const IndexId> sliced) {
  validate_order(order, tn);
  std::vector<char> fixed(tn.index_dims.size(), 0);
  for (const Index& o : tn.open_outputs) fixed[o.id] = 1;
  for (IndexId id : sliced) {
    if (id < 0 || id >= static_cast<IndexId>(fixed.size())) {
      throw InvalidArgument("sliced index " + std::to_string(id) + " not in network");
    }
    fixed[id] = 1;
  }

  OrderShapes shapes;
  shapes.sets.reserve(static_cast<std::size_t>(2 * tn.size() - 1));
  for (const Tensor& t : tn.tensors) {
    std::vector<IndexId> ids;
    for (const Index& i : t.indices()) {
      if (!fixed[i.id]) ids.push_back(i.id);
    }
    std::sort(ids.begin(), ids.end());
    shapes.sets.push_back(std::move(ids));
  }
  shapes.step_costs.reserve(order.steps.size());
  for (const ContractionStep& st : order.steps) {
    const auto& a = shapes.sets[st.lhs];
    const auto& b = shapes.sets[st.rhs];
    shapes.step_costs.push_back(pair_cost(a, b, tn.index_dims));
    shapes.sets.push_back(symmetric_difference(a, b));
  }
  return shapes;
}

BlockPartition partition_blocks(const ContractionOrder& order, const TensorNetwork& tn,
                                std::span<const IndexId> sliced) {
  const OrderShapes shapes = order_shapes(order, tn, sliced);
  const int t = tn.size();
  std::vector<std::vector<int>> outputs_of(static_cast<std::size_t>(t));
  for (int q = 0; q < tn.n_qubits; ++q) outputs_of[tn.output_tensor[q]].push_back(q);

  BlockPartition p;
  std::vector<int> begins{0};
  auto open = [&](int tensor, int at) {
    for (int q : outputs_of[tensor]) {
      p.layer_order.push_back(q);
      begins.push_back(at);
    }
  };
  for (int s = 0; s < static_cast<int>(order.steps.size()); ++s) {
    for (int operand : {order.steps[s].lhs, order.steps[s].rhs}) {
      if (operand < t && tn.bright[operand]) open(operand, s);
    }
  }
  if (t == 1) open(0, 0);
  if (p.n_layers() != tn.n_qubits) {
    throw MismatchError("order opened " + std::to_string(p.n_layers()) +
                        " output layers, network has " + std::to_string(tn.n_qubits));
  }

  const int n_steps = static_cast<int>(order.steps.size());
  for (std::size_t l = 0; l < begins.size(); ++l) {
    const int end = l + 1 < begins.size() ? begins[l + 1] : n_steps;
    p.blocks.emplace_back(begins[l], end);
    std::uint64_t cost = 0;
    for (int s = begins[l]; s < end; ++s) cost = checked_add(cost, shapes.step_costs[s]);
    p.block_costs.push_back(cost);
  }
  return p;
}

LayerWidths layer_widths(std::span<const int> layer_order,
                         std::span<const Bitstring> bitstrings) {
  const int n = static_cast<int>(layer_order.size());
  if (bitstrings.empty()) throw InvalidArgument("layer widths need at least one bitstring");
  for (const Bitstring& b : bitstrings) {
    if (b.size() != n) {
      throw MismatchError("bitstring of length " + std::to_string(b.size()) +
                          " for " + std::to_string(n) + " output layers");
    }
  }

  // lcp_hist[j] counts adjacent distinct keys (in sorted order) whose
  // common prefix has length j.
  std::vector<std::uint64_t> lcp_hist(static_cast<std::size_t>(n) + 1, 0);
  std::uint64_t distinct = 0;
  if (n <= 64) {
    std::vector<std::uint64_t> keys;
    keys.reserve(bitstrings.size());
    for (const Bitstring& b : bitstrings) {
      std::uint64_t key = 0;
      for (int j = 0; j < n; ++j) {
        key |= static_cast<std::uint64_t>(b.bit(layer_order[j])) << (63 - j);
      }
      keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    distinct = keys.size();
    for (std::size_t i = 1; i < keys.size(); ++i) {
      ++lcp_hist[std::countl_zero(keys[i - 1] ^ keys[i])];
    }
  } else {
    std::vector<std::string> keys;
    keys.reserve(bitstrings.size());
    for (const Bitstring& b : bitstrings) {
      std::string key(static_cast<std::size_t>(n), '0');
      for (int j = 0; j < n; ++j) key[j] = b.str()[layer_order[j]];
      keys.push_back(std::move(key));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    distinct = keys.size();
    for (std::size_t i = 1; i < keys.size(); ++i) {
      const auto mm = std::mismatch(keys[i - 1].begin(), keys[i - 1].end(), keys[i].begin());
      ++lcp_hist[mm.first - keys[i - 1].begin()];
    }
  }

  LayerWidths out;
  out.k = distinct;
  out.w.resize(static_cast<std::size_t>(n) + 1);
  std::uint64_t running = 1;
  for (int l = 0; l <= n; ++l) {
    // Prefixes of length l split wherever adjacent keys differ before l.
    if (l > 0) running += lcp_hist[l - 1];
    out.w[l] = running;
  }
  return out;
}

LayerWidths expected_widths(std::uint64_t k, int n) {
  if (k == 0) throw InvalidArgument("expected widths need k >= 1");
  if (n < 0) throw InvalidArgument("expected widths need n >= 0");
  LayerWidths out;
  out.k = k;
  out.w.resize(static_cast<std::size_t>(n) + 1);
  const double kd = static_cast<double>(k);
  for (int l = 0; l <= n; ++l) {
    const double slots = std::ldexp(1.0, l);
    const double occupied = l == 0 ? 1.0 : -std::expm1(kd * std::log1p(-1.0 / slots));
    const double expected = std::round(slots * occupied);
    out.w[l] = static_cast<std::uint64_t>(std::clamp(expected, 1.0, kd));
  }
  return out;
}

std::uint64_t single_cost(const ContractionOrder& order, const TensorNetwork& tn,
                          std::span<const IndexId> sliced) {
  const OrderShapes shapes = order_shapes(order, tn, sliced);
  std::uint64_t total = 0;
  for (std::uint64_t c : shapes.step_costs) total = checked_add(total, c);
  return total;
}

std::uint64_t multi_cost(const BlockPartition& partition, const LayerWidths& widths) {
  if (widths.w.size() != partition.block_costs.size()) {
    throw MismatchError("widths cover " + std::to_string(widths.w.size()) +
                        " layers, partition has " +
                        std::to_string(partition.block_costs.size()) + " blocks");
  }
  std::uint64_t total = 0;
  for (std::size_t l = 0; l < widths.w.size(); ++l) {
    total = checked_add(total, checked_mul(widths.w[l], partition.block_costs[l]));
  }
  return total;
}

CostReport cost_report(const BlockPartition& partition, const LayerWidths& widths) {
  CostReport r;
  r.block_costs = partition.block_costs;
  for (std::uint64_t c : r.block_costs) r.single_cost = checked_add(r.single_cost, c);
  r.multi_cost = multi_cost(partition, widths);
  r.k = widths.k;
  r.linear_baseline = checked_mul(r.k, r.single_cost);
  r.reuse_ratio = r.multi_cost == 0
                      ? 1.0
                      : static_cast<double>(r.linear_baseline) /
                            static_cast<double>(r.multi_cost);
  return r;
}

}  // namespace matnc

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

#include "matnc/executor.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <string>
#include <thread>
#include <utility>

#include "matnc/error.h"

namespace matnc {
namespace {

class LiveTracker {
 public:
  void add(std::uint64_t n) {
    std::uint64_t now = live_.fetch_add(n) + n;
    std::uint64_t seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
  }
  void sub(std::uint64_t n) { live_.fetch_sub(n); }
  std::uint64_t peak() const { return peak_.load(); }

 private:
  std::atomic<std::uint64_t> live_{0};
  std::atomic<std::uint64_t> peak_{0};
};

struct Context {
  // Fixed value of every qubit's output on the current path, or -1.
  std::vector<int> outputs;
  std::vector<std::int64_t> slice;
  LiveTracker* tracker = nullptr;
  std::uint64_t multiplications = 0;
  int max_rank = 0;
};

struct LeafFix {
  IndexId id;
  int qubit;      // >= 0 for an output
  int slice_pos;  // >= 0 for a sliced index
};

template <typename Real>
class Engine {
 public:
  using T = BasicTensor<Real>;
  using Ptr = std::shared_ptr<const T>;
  using Frontier = std::vector<std::pair<int, Ptr>>;

  Engine(const TensorNetwork& tn, const ContractionOrder& order,
         std::span<const IndexId> sliced, const ExecOptions& options)
      : tn_(tn), order_(order), options_(options), fixes_(tn.size()) {
    validate_order(order, tn);
    std::vector<int> slice_pos(tn.index_dims.size(), -1);
    for (std::size_t j = 0; j < sliced.size(); ++j) {
      IndexId id = sliced[j];
      if (id < 0 || id >= static_cast<IndexId>(tn.index_dims.size())) {
        throw IndexError("sliced index " + std::to_string(id) + " is not in the network");
      }
      slice_pos[id] = static_cast<int>(j);
    }
    leaves_.reserve(tn.size());
    for (int t = 0; t < tn.size(); ++t) {
      const Tensor& src = tn.tensors[t];
      if constexpr (std::is_same_v<Real, double>) {
        leaves_.push_back(src);
      } else {
        leaves_.push_back(src.template cast<Real>());
      }
      for (const Index& ix : src.indices()) {
        if (ix.tag == IndexTag::kOutput) {
          fixes_[t].push_back({ix.id, ix.qubit, -1});
        } else if (slice_pos[ix.id] >= 0) {
          fixes_[t].push_back({ix.id, -1, slice_pos[ix.id]});
        }
      }
    }
  }

  int num_tensors() const { return tn_.size(); }

  T fetch_leaf(int t, const Context& ctx) const {
    T out = leaves_[t];
    for (const LeafFix& f : fixes_[t]) {
      std::int64_t v = f.qubit >= 0 ? ctx.outputs[f.qubit] : ctx.slice[f.slice_pos];
      if (v < 0) {
        throw MismatchError("output of qubit " + std::to_string(f.qubit) +
                            " is needed before its layer is fixed");
      }
      out = fix_index(out, f.id, v);
    }
    return out;
  }

  void run_steps(int begin, int end, Frontier& frontier, Context& ctx) const {
    for (int s = begin; s < end; ++s) {
      const ContractionStep& step = order_.steps[s];
      T lhs_leaf, rhs_leaf;
      Ptr lhs = take(frontier, step.lhs, ctx, lhs_leaf);
      Ptr rhs = take(frontier, step.rhs, ctx, rhs_leaf);
      T result;
      try {
        result = contract_pair(lhs ? *lhs : lhs_leaf, rhs ? *rhs : rhs_leaf,
                               options_.max_elements, &ctx.multiplications);
      } catch (const CapacityError& e) {
        throw CapacityError(std::string(e.what()) + " at step " + std::to_string(s) +
                            "; slice more indices (lower --max-rank)");
      }
      ctx.max_rank = std::max(ctx.max_rank, static_cast<int>(result.rank()));
      std::uint64_t n = result.size();
      LiveTracker* tracker = ctx.tracker;
      Ptr p(new T(std::move(result)), [tracker, n](const T* t) {
        tracker->sub(n);
        delete t;
      });
      tracker->add(n);
      frontier.emplace_back(step.result, std::move(p));
    }
  }

  std::complex<double> final_value(Frontier& frontier, const Context& ctx) const {
    int id = order_.final_id();
    std::complex<Real> v;
    if (id < num_tensors()) {
      T t = fetch_leaf(id, ctx);
      if (t.rank() != 0) throw MismatchError("network does not reduce to a scalar");
      v = t.value();
    } else {
      auto it = std::find_if(frontier.begin(), frontier.end(),
                             [id](const auto& e) { return e.first == id; });
      if (it == frontier.end() || it->second->rank() != 0) {
        throw MismatchError("network does not reduce to a scalar");
      }
      v = it->second->value();
    }
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  }

  void enter(const ReuseTree& tree, int node, Context& ctx) const {
    const ReuseNode& nd = tree.nodes[node];
    int d = std::max(nd.first_block, 1);
    for (std::uint8_t v : nd.values) ctx.outputs[tree.layer_order[d++ - 1]] = v;
  }

  void run_node(const ReuseTree& tree, int node, Frontier& frontier, Context& ctx) const {
    enter(tree, node, ctx);
    const ReuseNode& nd = tree.nodes[node];
    for (int b = nd.first_block; b <= nd.last_block; ++b) {
      run_steps(tree.blocks[b].first, tree.blocks[b].second, frontier, ctx);
    }
  }

  void dfs(const ReuseTree& tree, int node, Frontier frontier, Context& ctx,
           std::vector<std::complex<double>>& out) const {
    run_node(tree, node, frontier, ctx);
    const ReuseNode& nd = tree.nodes[node];
    if (nd.children.empty()) {
      out[nd.leaf] = final_value(frontier, ctx);
    } else if (nd.children.size() == 1) {
      dfs(tree, nd.children[0], std::move(frontier), ctx, out);
    } else {
      for (int c : nd.children) dfs(tree, c, frontier, ctx, out);
    }
  }

 private:
  Ptr take(Frontier& frontier, int id, const Context& ctx, T& leaf) const {
    if (id < num_tensors()) {
      leaf = fetch_leaf(id, ctx);
      return nullptr;
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (frontier[i].first == id) {
        Ptr p = std::move(frontier[i].second);
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(i));
        return p;
      }
    }
    throw MismatchError("step operand " + std::to_string(id) + " is not available");
  }

  const TensorNetwork& tn_;
  const ContractionOrder& order_;
  ExecOptions options_;
  std::vector<T> leaves_;
  std::vector<std::vector<LeafFix>> fixes_;
};

void check_tree(const ReuseTree& tree, const TensorNetwork& tn, const ContractionOrder& order) {
  BlockPartition p = partition_blocks(order, tn);
  if (tree.layer_order != p.layer_order || tree.blocks != p.blocks) {
    throw MismatchError("reuse tree was not built from this order's partition");
  }
}

AmplitudeSet assemble(const TensorNetwork& tn, const ReuseTree& tree,
                      const std::vector<std::complex<double>>& sums, Instrumentation stats) {
  AmplitudeSet out;
  out.n_qubits = tn.n_qubits;
  out.fingerprint = tn.fingerprint();
  out.stats = stats;
  out.entries.reserve(tree.request_to_distinct.size());
  for (int d : tree.request_to_distinct) {
    out.entries.push_back({tree.distinct[d], sums[d], std::norm(sums[d])});
  }
  return out;
}

template <typename Real>
std::complex<double> single_impl(const TensorNetwork& tn, const ContractionOrder& order,
                                 const Bitstring& bitstring, std::span<const IndexId> sliced,
                                 const ExecOptions& options, Instrumentation* stats) {
  if (bitstring.size() != tn.n_qubits) {
    throw MismatchError("bitstring has length " + std::to_string(bitstring.size()) +
                        ", expected " + std::to_string(tn.n_qubits));
  }
  Engine<Real> engine(tn, order, sliced, options);
  LiveTracker tracker;
  Context ctx;
  ctx.tracker = &tracker;
  ctx.outputs.resize(tn.n_qubits);
  for (int q = 0; q < tn.n_qubits; ++q) ctx.outputs[q] = bitstring.bit(q);
  std::uint64_t n_slices = slice_count(sliced, tn.index_dims);
  std::complex<double> sum = 0;
  for (std::uint64_t s = 0; s < n_slices; ++s) {
    ctx.slice = slice_values(sliced, tn.index_dims, s);
    typename Engine<Real>::Frontier frontier;
    engine.run_steps(0, static_cast<int>(order.steps.size()), frontier, ctx);
    sum += engine.final_value(frontier, ctx);
  }
  if (stats) {
    stats->multiplications += ctx.multiplications;
    stats->peak_live_elements = std::max(stats->peak_live_elements, tracker.peak());
    stats->max_result_rank = std::max(stats->max_result_rank, ctx.max_rank);
    stats->n_slices = n_slices;
  }
  return sum;
}

template <typename Real>
AmplitudeSet multi_impl(const TensorNetwork& tn, const ContractionOrder& order,
                        const ReuseTree& tree, std::span<const IndexId> sliced,
                        const ExecOptions& options) {
  Engine<Real> engine(tn, order, sliced, options);
  check_tree(tree, tn, order);
  LiveTracker tracker;
  Context ctx;
  ctx.tracker = &tracker;
  Instrumentation stats;
  stats.n_slices = slice_count(sliced, tn.index_dims);
  std::vector<std::complex<double>> sums(tree.distinct.size());
  std::vector<std::complex<double>> partial(tree.distinct.size());
  for (std::uint64_t s = 0; s < stats.n_slices; ++s) {
    ctx.outputs.assign(tn.n_qubits, -1);
    ctx.slice = slice_values(sliced, tn.index_dims, s);
    engine.dfs(tree, 0, {}, ctx, partial);
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += partial[i];
  }
  stats.multiplications = ctx.multiplications;
  stats.peak_live_elements = tracker.peak();
  stats.max_result_rank = ctx.max_rank;
  return assemble(tn, tree, sums, stats);
}

// Runs tasks 0..count-1 on up to `workers` threads. Failures are reported
// in ascending task order.
template <typename Fn, typename Name>
void run_tasks(std::size_t count, int workers, Fn&& fn, Name&& name) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n_threads = std::min<std::size_t>(count, static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(loop);
  loop();
  for (std::thread& t : threads) t.join();
  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw RunError(name(i) + " failed: " + e.what());
    }
  }
}

template <typename Real>
AmplitudeSet parallel_impl(const TensorNetwork& tn, const ContractionOrder& order,
                           const ReuseTree& tree, std::span<const IndexId> sliced, int workers,
                           const ExecOptions& options) {
  using Frontier = typename Engine<Real>::Frontier;
  Engine<Real> engine(tn, order, sliced, options);
  check_tree(tree, tn, order);
  Instrumentation stats;
  stats.n_slices = slice_count(sliced, tn.index_dims);
  const std::size_t k = tree.distinct.size();
  std::vector<std::complex<double>> sums(k);

  if (stats.n_slices > 1) {
    const std::uint64_t window = 2 * static_cast<std::uint64_t>(workers);
    for (std::uint64_t w0 = 0; w0 < stats.n_slices; w0 += window) {
      std::size_t count = static_cast<std::size_t>(std::min(window, stats.n_slices - w0));
      std::vector<std::vector<std::complex<double>>> partial(
          count, std::vector<std::complex<double>>(k));
      std::vector<Instrumentation> task_stats(count);
      run_tasks(
          count, workers,
          [&](std::size_t i) {
            LiveTracker tracker;
            Context ctx;
            ctx.tracker = &tracker;
            ctx.outputs.assign(tn.n_qubits, -1);
            ctx.slice = slice_values(sliced, tn.index_dims, w0 + i);
            engine.dfs(tree, 0, {}, ctx, partial[i]);
            task_stats[i].multiplications = ctx.multiplications;
            task_stats[i].peak_live_elements = tracker.peak();
            task_stats[i].max_result_rank = ctx.max_rank;
          },
          [&](std::size_t i) { return "slice " + std::to_string(w0 + i); });
      for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < k; ++j) sums[j] += partial[i][j];
        stats.multiplications += task_stats[i].multiplications;
        stats.peak_live_elements =
            std::max(stats.peak_live_elements, task_stats[i].peak_live_elements);
        stats.max_result_rank = std::max(stats.max_result_rank, task_stats[i].max_result_rank);
      }
    }
    return assemble(tn, tree, sums, stats);
  }

  // One slice: split the tree breadth-first into subtree tasks.
  struct Task {
    int node;
    Frontier frontier;
    std::vector<int> outputs;
  };
  LiveTracker main_tracker;
  Context main;
  main.tracker = &main_tracker;
  main.slice = slice_values(sliced, tn.index_dims, 0);
  std::vector<Task> tasks;
  tasks.push_back({0, {}, std::vector<int>(tn.n_qubits, -1)});
  const std::size_t target = 4 * static_cast<std::size_t>(workers);
  bool expanded = true;
  while (expanded && tasks.size() < target) {
    expanded = false;
    std::vector<Task> next;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      Task& task = tasks[i];
      const ReuseNode& nd = tree.nodes[task.node];
      if (nd.children.empty() || next.size() + (tasks.size() - i) >= target) {
        next.push_back(std::move(task));
        continue;
      }
      main.outputs = task.outputs;
      engine.run_node(tree, task.node, task.frontier, main);
      for (int c : nd.children) next.push_back({c, task.frontier, main.outputs});
      task.frontier.clear();
      expanded = true;
    }
    tasks = std::move(next);
  }
  std::vector<Instrumentation> task_stats(tasks.size());
  std::vector<std::complex<double>> partial(k);
  run_tasks(
      tasks.size(), workers,
      [&](std::size_t i) {
        LiveTracker tracker;
        Context ctx;
        ctx.tracker = &tracker;
        ctx.outputs = tasks[i].outputs;
        ctx.slice = main.slice;
        engine.dfs(tree, tasks[i].node, std::move(tasks[i].frontier), ctx, partial);
        task_stats[i].multiplications = ctx.multiplications;
        task_stats[i].peak_live_elements = tracker.peak();
        task_stats[i].max_result_rank = ctx.max_rank;
      },
      [&](std::size_t i) {
        return "slice 0 (subtree at node " + std::to_string(tasks[i].node) + ")";
      });
  for (std::size_t j = 0; j < k; ++j) sums[j] += partial[j];
  stats.multiplications = main.multiplications;
  stats.peak_live_elements = main_tracker.peak();
  stats.max_result_rank = main.max_rank;
  for (const Instrumentation& t : task_stats) {
    stats.multiplications += t.multiplications;
    stats.peak_live_elements = std::max(stats.peak_live_elements, t.peak_live_elements);
    stats.max_result_rank = std::max(stats.max_result_rank, t.max_result_rank);
  }
  return assemble(tn, tree, sums, stats);
}

}  // namespace

std::uint64_t slice_count(std::span<const IndexId> sliced,
                          std::span<const std::int64_t> index_dims) {
  std::uint64_t n = 1;
  for (IndexId id : sliced) {
    if (id < 0 || static_cast<std::size_t>(id) >= index_dims.size()) {
      throw IndexError("sliced index " + std::to_string(id) + " is not in the network");
    }
    n *= static_cast<std::uint64_t>(index_dims[id]);
  }
  return n;
}

std::vector<std::int64_t> slice_values(std::span<const IndexId> sliced,
                                       std::span<const std::int64_t> index_dims,
                                       std::uint64_t slice) {
  std::vector<std::int64_t> values(sliced.size());
  for (std::size_t j = sliced.size(); j-- > 0;) {
    std::uint64_t d = static_cast<std::uint64_t>(index_dims[sliced[j]]);
    values[j] = static_cast<std::int64_t>(slice % d);
    slice /= d;
  }
  return values;
}

std::complex<double> run_single(const TensorNetwork& tn, const ContractionOrder& order,
                                const Bitstring& bitstring, std::span<const IndexId> sliced,
                                const ExecOptions& options, Instrumentation* stats) {
  if (options.precision == Precision::kSingle) {
    return single_impl<float>(tn, order, bitstring, sliced, options, stats);
  }
  return single_impl<double>(tn, order, bitstring, sliced, options, stats);
}

AmplitudeSet run_multi(const TensorNetwork& tn, const ContractionOrder& order,
                       const ReuseTree& tree, std::span<const IndexId> sliced,
                       const ExecOptions& options) {
  if (options.precision == Precision::kSingle) {
    return multi_impl<float>(tn, order, tree, sliced, options);
  }
  return multi_impl<double>(tn, order, tree, sliced, options);
}

AmplitudeSet run_parallel(const TensorNetwork& tn, const ContractionOrder& order,
                          const ReuseTree& tree, std::span<const IndexId> sliced, int workers,
                          const ExecOptions& options) {
  if (workers < 1) throw InvalidArgument("workers must be at least 1");
  if (workers == 1) return run_multi(tn, order, tree, sliced, options);
  if (options.precision == Precision::kSingle) {
    return parallel_impl<float>(tn, order, tree, sliced, workers, options);
  }
  return parallel_impl<double>(tn, order, tree, sliced, workers, options);
}

}  // namespace matnc

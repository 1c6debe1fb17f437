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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// non-zero if any criterion fails. Seeds and tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include <unistd.h>

#include "matnc/circuit.h"
#include "matnc/cost_model.h"
#include "matnc/error.h"
#include "matnc/executor.h"
#include "matnc/io.h"
#include "matnc/oracle.h"
#include "matnc/order_search.h"
#include "matnc/reuse_plan.h"
#include "matnc/rng.h"
#include "matnc/xeb.h"

namespace matnc {
namespace {

constexpr double kAmplitudeTol = 1e-10;
constexpr int kOracleInstances = 52;
constexpr double kOracleSeconds = 600;
constexpr double kScalingSeconds = 300;
constexpr double kXebSeconds = 300;
constexpr double kSlopeLimit = 0.8;
constexpr double kSigmas = 3;
constexpr double kKsCoefficient = 1.63;  // 1% level, large-sample

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_error(std::complex<double> a, std::complex<double> b, int n) {
  return std::abs(a - b) / std::max(std::abs(b), std::pow(2.0, -0.5 * n));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

struct Instance {
  int n = 0;
  Circuit circuit;
  TensorNetwork tn;
  ContractionOrder order;
  BlockPartition partition;
};

Instance oracle_instance(int i) {
  Instance in;
  in.n = 4 + i % 11;
  const int depth = 4 + (i * 7) % 17;
  const int cols = in.n <= 6 ? 2 : in.n <= 9 ? 3 : 4;
  in.circuit = random_circuit(in.n, cols, depth, 1000 + i);
  in.tn = build_tensor_network(in.circuit);
  std::vector<Bitstring> bs = random_bitstrings(in.n, 256, 5000 + i, false);
  SearchConfig cfg;
  cfg.budget = 300;
  cfg.seed = i;
  in.order = anneal_order(in.tn, greedy_order(in.tn, i), cfg, bs).order;
  in.partition = partition_blocks(in.order, in.tn);
  return in;
}

// Criteria 1, 2 and 5 share instances.
void oracle_cost_memory() {
  const auto t0 = Clock::now();
  double worst_err = 0;
  int cost_mismatch = 0, peak_mismatch = 0, dfs_above_bfs = 0, runs = 0;
  std::vector<double> dfs_ratios, bfs_ratios;
  for (int i = 0; i < kOracleInstances; ++i) {
    Instance in = oracle_instance(i);
    StateVector psi = statevector(in.circuit);
    for (std::size_t k : {1, 7, 64, 256}) {
      std::vector<Bitstring> bs = random_bitstrings(in.n, k, 7000 + 10 * i + k, false);
      ReuseTree tree = coalesce(build_tree(in.partition, bs));
      AmplitudeSet amps = run_multi(in.tn, in.order, tree);
      ++runs;
      for (const AmplitudeEntry& e : amps.entries) {
        worst_err = std::max(worst_err, relative_error(e.amplitude, psi.amplitude(e.bitstring), in.n));
      }
      if (amps.stats.multiplications != multi_cost(in.partition, layer_widths(in.partition, bs))) {
        ++cost_mismatch;
      }
      Instrumentation single;
      run_single(in.tn, in.order, bs[0], {}, {}, &single);
      if (single.multiplications != single_cost(in.order, in.tn)) ++cost_mismatch;

      MemoryPlan plan = plan_memory(tree, in.tn, in.order);
      if (plan.peak_elements != amps.stats.peak_live_elements) ++peak_mismatch;
      if (single.peak_live_elements != plan.single_amplitude_peak) ++peak_mismatch;
      const double base = static_cast<double>(plan.single_amplitude_peak);
      const double dfs = plan.peak_elements / base;
      const double bfs = plan_memory_breadth_first(tree, in.tn, in.order) / base;
      if (dfs > bfs) ++dfs_above_bfs;
      if (k == 256) {
        dfs_ratios.push_back(dfs);
        bfs_ratios.push_back(bfs);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  verdict(1, worst_err <= kAmplitudeTol && elapsed < kOracleSeconds,
          std::to_string(kOracleInstances) + " circuits x k in {1,7,64,256}, max relative error " +
              fmt("%.3g", worst_err) + " (limit 1e-10), " + fmt("%.1f", elapsed) +
              " s (limit 600 s)");
  verdict(2, cost_mismatch == 0,
          std::to_string(2 * runs) + " instrumented counts vs S and S_k, " +
              std::to_string(cost_mismatch) + " mismatches");
  verdict(5, peak_mismatch == 0 && dfs_above_bfs == 0,
          std::to_string(2 * runs) + " peaks vs plan, " + std::to_string(peak_mismatch) +
              " mismatches; peak(k)/peak(1) above breadth-first on " +
              std::to_string(dfs_above_bfs) + " runs; at k=256 median " +
              fmt("%.2f", median(dfs_ratios)) + " max " +
              fmt("%.2f", *std::max_element(dfs_ratios.begin(), dfs_ratios.end())) +
              " (breadth-first median " + fmt("%.2f", median(bfs_ratios)) + ")");
}

void scaling() {
  const auto t0 = Clock::now();
  const int n = 20, log2_max = 16;
  Circuit c = random_circuit(n, 5, 20, 1);
  TensorNetwork tn = build_tensor_network(c);
  SearchConfig cfg;
  cfg.loss = Loss::kMulti;
  cfg.widths_source = WidthsSource::kExpected;
  cfg.expected_k = std::uint64_t{1} << log2_max;
  cfg.budget = 5000;
  cfg.seed = 1;
  ContractionOrder order = anneal_order(tn, greedy_order(tn, 1), cfg).order;
  BlockPartition p = partition_blocks(order, tn);
  std::vector<Bitstring> all = random_bitstrings(n, std::size_t{1} << log2_max, 2, false);
  bool monotone = true;
  double prev = 0;
  std::vector<double> xs, ys;
  for (int e = 0; e <= log2_max; ++e) {
    const std::size_t k = std::size_t{1} << e;
    std::span<const Bitstring> prefix(all.data(), k);
    const double sk = static_cast<double>(multi_cost(p, layer_widths(p, prefix)));
    const double per = sk / static_cast<double>(k);
    if (e > 0 && per > prev) monotone = false;
    prev = per;
    if (static_cast<double>(k) * 100 >= static_cast<double>(all.size())) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(sk));
    }
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  const double elapsed = seconds_since(t0);
  verdict(3, monotone && slope < kSlopeLimit && elapsed < kScalingSeconds,
          std::string("n=20 depth 20, S_k/k ") + (monotone ? "non-increasing" : "NOT monotone") +
              " over k=2^0..2^16, log-log slope " + fmt("%.3f", slope) +
              " over k=2^10..2^16 (limit 0.8), " + fmt("%.1f", elapsed) + " s");
}

void loss_choice() {
  const int n = 12;
  Circuit c = random_circuit(n, 4, 12, 11);
  TensorNetwork tn = build_tensor_network(c);
  std::vector<Bitstring> bs = random_bitstrings(n, 4096, 12, false);
  std::vector<double> multi, single;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ContractionOrder init = greedy_order(tn, seed);
    SearchConfig cfg;
    cfg.budget = 2000;
    cfg.seed = seed;
    for (Loss loss : {Loss::kMulti, Loss::kSingle}) {
      cfg.loss = loss;
      ContractionOrder o = anneal_order(tn, init, cfg, bs).order;
      BlockPartition p = partition_blocks(o, tn);
      const double sk = static_cast<double>(multi_cost(p, layer_widths(p, bs)));
      (loss == Loss::kMulti ? multi : single).push_back(sk);
    }
  }
  const double mm = median(multi), ms = median(single);
  verdict(4, mm <= ms,
          "n=12 k=4096, 10 seeds, median S_k multi-loss " + fmt("%.4g", mm) + " vs single-loss " +
              fmt("%.4g", ms) + " (ratio " + fmt("%.2f", ms / mm) + "x)");
}

void slicing() {
  int checked = 0, bad_amp = 0, bad_rank = 0;
  double worst = 0;
  std::vector<int> counts(7, 0);
  for (int i = 0; i < kOracleInstances && checked < 20; ++i) {
    Instance in = oracle_instance(i);
    const int full = max_intermediate_rank(in.order, in.tn);
    SliceSpec spec;
    int max_rank = full - 1;
    for (; max_rank >= 1; --max_rank) {
      try {
        spec = select_slices(in.order, in.tn, max_rank);
      } catch (const InfeasibleError&) {
        spec.sliced_ids.clear();
        break;
      }
      if (spec.sliced_ids.size() >= 2) break;
    }
    if (spec.sliced_ids.size() < 2 || spec.sliced_ids.size() > 6) continue;
    ++checked;
    ++counts[spec.sliced_ids.size()];
    std::vector<Bitstring> bs = random_bitstrings(in.n, 64, 9000 + i, false);
    ReuseTree tree = coalesce(build_tree(in.partition, bs));
    AmplitudeSet plain = run_multi(in.tn, in.order, tree);
    AmplitudeSet sliced = run_multi(in.tn, in.order, tree, spec.sliced_ids);
    if (sliced.stats.max_result_rank > max_rank) ++bad_rank;
    for (std::size_t j = 0; j < bs.size(); ++j) {
      const double err = relative_error(sliced.entries[j].amplitude, plain.entries[j].amplitude, in.n);
      worst = std::max(worst, err);
      if (err > kAmplitudeTol) ++bad_amp;
    }
  }
  std::string hist;
  for (int s = 2; s <= 6; ++s) hist += " " + std::to_string(s) + ":" + std::to_string(counts[s]);
  verdict(6, checked >= 10 && bad_amp == 0 && bad_rank == 0,
          std::to_string(checked) + " sliced instances (sliced indices" + hist +
              "), max relative error " + fmt("%.3g", worst) + ", rank violations " +
              std::to_string(bad_rank));
}

void xeb() {
  const auto t0 = Clock::now();
  const int n = 12;
  const std::size_t k = 100000;
  const double dim = std::ldexp(1.0, n);
  StateVector psi = statevector(random_circuit(n, 4, 20, 1));
  double ipr = 0;
  for (const auto& a : psi.amplitudes) ipr += std::norm(a) * std::norm(a);
  auto probs_of = [&](const std::vector<Bitstring>& bs) {
    std::vector<double> p;
    p.reserve(bs.size());
    for (const Bitstring& b : bs) p.push_back(std::norm(psi.amplitude(b)));
    return p;
  };
  std::vector<Bitstring> ideal = sample_bitstrings(psi, k, 3);
  std::vector<Bitstring> uniform = random_bitstrings(n, k, 4, false);
  std::vector<Bitstring> mixed;
  std::vector<Bitstring> extra_ideal = sample_bitstrings(psi, k, 5);
  std::vector<Bitstring> extra_uniform = random_bitstrings(n, k, 6, false);
  Rng coin(7);
  for (std::size_t i = 0; i < k; ++i) mixed.push_back(coin.uniform() < 0.3 ? extra_ideal[i] : extra_uniform[i]);

  std::vector<double> pi = probs_of(ideal);
  XebEstimate ei = xeb_estimate(pi, n);
  std::vector<double> xs;
  for (double p : pi) xs.push_back(p * dim);
  const double ks = ks_statistic(xs, 1.0);
  const double ks_crit = kKsCoefficient / std::sqrt(static_cast<double>(k));
  XebEstimate eu = xeb_estimate(probs_of(uniform), n);
  XebEstimate em = xeb_estimate(probs_of(mixed), n);
  const bool ok_i = std::abs(ei.f_xeb - 1.0) <= kSigmas * ei.stderr_mean;
  const bool ok_ks = ks < ks_crit;
  const bool ok_u = std::abs(eu.f_xeb) <= kSigmas * eu.stderr_mean;
  const bool ok_m = std::abs(em.f_xeb - 0.3) <= kSigmas * em.stderr_mean;
  const double elapsed = seconds_since(t0);
  verdict(7, ok_i && ok_ks && ok_u && ok_m && elapsed < kXebSeconds,
          "n=12 depth 20 k=1e5: ideal F=" + fmt("%.4f", ei.f_xeb) + "+-" + fmt("%.4f", ei.stderr_mean) +
              (ok_i ? " ok" : " out") + ", KS " + fmt("%.4f", ks) + " vs " + fmt("%.4f", ks_crit) +
              (ok_ks ? " ok" : " out") + ", uniform F=" + fmt("%.4f", eu.f_xeb) + "+-" +
              fmt("%.4f", eu.stderr_mean) + (ok_u ? " ok" : " out") + ", mixture F=" +
              fmt("%.4f", em.f_xeb) + "+-" + fmt("%.4f", em.stderr_mean) + (ok_m ? " ok" : " out") +
              "; this state's exact N*sum(p^2)-1 = " + fmt("%.4f", dim * ipr - 1) + ", " +
              fmt("%.1f", elapsed) + " s");
}

bool run_cli(const std::string& args) {
  const std::string cmd = std::string(MATNC_CLI) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

void determinism() {
  int compared = 0, differing = 0;
  for (int i : {3, 10, 21, 32, 43}) {
    Instance in = oracle_instance(i);
    std::vector<Bitstring> bs = random_bitstrings(in.n, 256, 11000 + i, false);
    ReuseTree tree = coalesce(build_tree(in.partition, bs));
    std::vector<IndexId> sliced;
    const int full = max_intermediate_rank(in.order, in.tn);
    if (full > 3) sliced = select_slices(in.order, in.tn, full - 2).sliced_ids;
    for (const auto& ids : {std::vector<IndexId>{}, sliced}) {
      const std::string ref = amplitudes_to_jsonl(run_parallel(in.tn, in.order, tree, ids, 1));
      for (int w : {4, 8}) {
        ++compared;
        if (amplitudes_to_jsonl(run_parallel(in.tn, in.order, tree, ids, w)) != ref) ++differing;
      }
    }
  }
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("matnc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string c = (dir / "c.txt").string(), b = (dir / "b.txt").string();
  bool cli_ok = run_cli("generate --qubits 12 --cols 4 --depth 12 --seed 5 --k 512 --out " + c +
                        " --bitstrings-out " + b);
  std::string ref;
  for (int w : {1, 4, 8}) {
    const fs::path out = dir / ("w" + std::to_string(w));
    cli_ok = cli_ok && run_cli("simulate --circuit " + c + " --bitstrings " + b +
                               " --budget 500 --seed 9 --max-rank 7 --workers " + std::to_string(w) +
                               " --out-dir " + out.string());
    if (!cli_ok) break;
    const std::string amps = read_file((out / "amplitudes.jsonl").string());
    if (w == 1) {
      ref = amps;
    } else {
      ++compared;
      if (amps != ref) ++differing;
    }
  }
  fs::remove_all(dir);
  verdict(8, cli_ok && differing == 0,
          std::to_string(compared) + " comparisons of workers 4 and 8 against 1 (library and CLI), " +
              std::to_string(differing) + " differ" + (cli_ok ? "" : "; CLI run failed"));
}

}  // namespace
}  // namespace matnc

int main() {
  using namespace matnc;
  auto guarded = [](int id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      verdict(id, false, std::string("exception: ") + e.what());
    }
  };
  guarded(1, oracle_cost_memory);
  guarded(3, scaling);
  guarded(4, loss_choice);
  guarded(6, slicing);
  guarded(7, xeb);
  guarded(8, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

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

// matnc: multi-amplitude tensor network contraction for quantum circuits.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matnc/bitstring.h"
#include "matnc/circuit.h"
#include "matnc/cost_model.h"
#include "matnc/error.h"
#include "matnc/executor.h"
#include "matnc/io.h"
#include "matnc/oracle.h"
#include "matnc/order_search.h"
#include "matnc/reuse_plan.h"
#include "matnc/xeb.h"

namespace fs = std::filesystem;
using namespace matnc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string circuit;
  std::string bitstrings;
  std::string order;
  std::string out_dir = ".";
  std::string out;
  std::string loss = "multi";
  std::string widths = "exact";
  std::string precision = "double";
  std::uint64_t k = 1;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  int max_rank = -1;
  int workers = 1;
  std::size_t max_elements = kDefaultMaxElements;
  // generate
  int qubits = 12;
  int cols = 4;
  int depth = 8;
  bool no_final_layer = false;
  std::string bitstrings_out;
  // oracle
  std::uint64_t sample = 0;
  int max_qubits = kDefaultOracleQubits;
  // xeb
  std::string amplitudes;
  int bins = 50;
  bool log_x = false;
  // scaling
  int max_log2_k = 16;
};

std::string out_path(const Config& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

Circuit load_circuit(const Config& cfg) {
  if (cfg.circuit.empty()) throw UsageError("--circuit is required");
  return parse_circuit(read_file(cfg.circuit));
}

std::vector<Bitstring> load_bitstrings(const Config& cfg, int n) {
  if (cfg.bitstrings.empty()) return {};
  return parse_bitstrings(read_file(cfg.bitstrings), n);
}

SearchConfig search_config(const Config& cfg, bool have_bitstrings) {
  SearchConfig sc;
  if (cfg.loss == "single") {
    sc.loss = Loss::kSingle;
  } else if (cfg.loss == "multi") {
    sc.loss = Loss::kMulti;
  } else {
    throw UsageError("--loss must be single or multi");
  }
  if (cfg.widths == "exact") {
    sc.widths_source = WidthsSource::kExact;
  } else if (cfg.widths == "expected") {
    sc.widths_source = WidthsSource::kExpected;
  } else {
    throw UsageError("--widths must be exact or expected");
  }
  if (sc.loss == Loss::kMulti && sc.widths_source == WidthsSource::kExact && !have_bitstrings) {
    throw UsageError("--loss multi with --widths exact needs --bitstrings");
  }
  sc.expected_k = cfg.k;
  sc.budget = cfg.budget;
  sc.seed = cfg.seed;
  return sc;
}

// Loaded from --order, else greedy refined by annealing when --budget > 0.
ContractionOrder obtain_order(const Config& cfg, const TensorNetwork& tn,
                              const std::vector<Bitstring>& bitstrings) {
  if (!cfg.order.empty()) return order_from_json(read_file(cfg.order), tn);
  ContractionOrder order = greedy_order(tn, cfg.seed);
  if (cfg.budget == 0) return order;
  return anneal_order(tn, order, search_config(cfg, !bitstrings.empty()), bitstrings).order;
}

SliceSpec slices_for(const Config& cfg, const ContractionOrder& order, const TensorNetwork& tn) {
  if (cfg.max_rank < 0) return make_slice_spec(order, tn, {});
  return select_slices(order, tn, cfg.max_rank);
}

LayerWidths report_widths(const Config& cfg, const BlockPartition& p,
                          const std::vector<Bitstring>& bitstrings) {
  if (!bitstrings.empty()) return layer_widths(p, bitstrings);
  return expected_widths(cfg.k, p.n_layers());
}

void print_report(const CostReport& r) {
  std::printf("single cost S      %llu\n", static_cast<unsigned long long>(r.single_cost));
  std::printf("multi cost S_k     %llu\n", static_cast<unsigned long long>(r.multi_cost));
  std::printf("k * S              %llu\n", static_cast<unsigned long long>(r.linear_baseline));
  std::printf("reuse ratio        %.6g\n", r.reuse_ratio);
}

int cmd_generate(const Config& cfg) {
  Circuit c = random_circuit(cfg.qubits, cfg.cols, cfg.depth, cfg.seed, !cfg.no_final_layer);
  if (cfg.out.empty()) {
    std::fputs(format_circuit(c).c_str(), stdout);
  } else {
    write_file(cfg.out, format_circuit(c));
  }
  if (!cfg.bitstrings_out.empty()) {
    write_file(cfg.bitstrings_out,
               format_bitstrings(random_bitstrings(cfg.qubits, cfg.k, cfg.seed, false)));
  }
  return 0;
}

int cmd_search(const Config& cfg) {
  Circuit c = load_circuit(cfg);
  TensorNetwork tn = build_tensor_network(c);
  std::vector<Bitstring> bs = load_bitstrings(cfg, c.n_qubits);
  SearchConfig sc = search_config(cfg, !bs.empty());
  ContractionOrder init = cfg.order.empty() ? greedy_order(tn, cfg.seed)
                                            : order_from_json(read_file(cfg.order), tn);
  SearchResult res = anneal_order(tn, init, sc, bs);
  BlockPartition p = partition_blocks(res.order, tn);
  CostReport report = cost_report(p, report_widths(cfg, p, bs));
  write_file(out_path(cfg, "order.json"), order_to_json(res.order, tn));
  write_file(out_path(cfg, "report.json"), cost_report_to_json(report));
  std::printf("initial loss       %.6g\nbest loss          %.6g\naccepted moves     %llu\n",
              res.initial_loss, res.best_loss,
              static_cast<unsigned long long>(res.accepted_moves));
  print_report(report);
  return 0;
}

int cmd_plan(const Config& cfg) {
  Circuit c = load_circuit(cfg);
  TensorNetwork tn = build_tensor_network(c);
  std::vector<Bitstring> bs = load_bitstrings(cfg, c.n_qubits);
  if (bs.empty()) throw UsageError("--bitstrings is required");
  ContractionOrder order = obtain_order(cfg, tn, bs);
  SliceSpec slices = slices_for(cfg, order, tn);
  BlockPartition p = partition_blocks(order, tn, slices.sliced_ids);
  ReuseTree tree = coalesce(build_tree(p, bs));
  MemoryPlan plan = plan_memory(tree, tn, order, slices.sliced_ids);
  std::uint64_t bfs = plan_memory_breadth_first(tree, tn, order, slices.sliced_ids);
  CostReport report = cost_report(p, layer_widths(p, bs));
  write_file(out_path(cfg, "plan.json"), plan_to_json(tree, plan, bfs, report, slices));
  print_report(report);
  std::printf("peak elements      %llu (%llu bytes)\n",
              static_cast<unsigned long long>(plan.peak_elements),
              static_cast<unsigned long long>(plan.peak_bytes()));
  std::printf("single peak        %llu\n",
              static_cast<unsigned long long>(plan.single_amplitude_peak));
  std::printf("slices             %llu\n", static_cast<unsigned long long>(slices.n_slices));
  return 0;
}

int cmd_simulate(const Config& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Circuit c = load_circuit(cfg);
  TensorNetwork tn = build_tensor_network(c);
  std::vector<Bitstring> bs = load_bitstrings(cfg, c.n_qubits);
  if (bs.empty()) throw UsageError("--bitstrings is required");
  ExecOptions opt;
  opt.max_elements = cfg.max_elements;
  if (cfg.precision == "single") {
    opt.precision = Precision::kSingle;
  } else if (cfg.precision != "double") {
    throw UsageError("--precision must be double or single");
  }
  ContractionOrder order = obtain_order(cfg, tn, bs);
  RunSummary summary;
  summary.slices = slices_for(cfg, order, tn);
  summary.workers = cfg.workers;
  BlockPartition p = partition_blocks(order, tn, summary.slices.sliced_ids);
  ReuseTree tree = coalesce(build_tree(p, bs));
  summary.plan = plan_memory(tree, tn, order, summary.slices.sliced_ids);
  // Per-slice costs times the slice count.
  CostReport report = cost_report(p, layer_widths(p, bs));
  report.single_cost *= summary.slices.n_slices;
  report.multi_cost *= summary.slices.n_slices;
  report.linear_baseline *= summary.slices.n_slices;
  summary.report = report;
  AmplitudeSet amps = run_parallel(tn, order, tree, summary.slices.sliced_ids, cfg.workers, opt);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(out_path(cfg, "amplitudes.jsonl"), amplitudes_to_jsonl(amps));
  write_file(out_path(cfg, "summary.json"), summary_to_json(amps, summary));
  print_report(report);
  std::printf("multiplications    %llu\n",
              static_cast<unsigned long long>(amps.stats.multiplications));
  std::printf("slices             %llu\n", static_cast<unsigned long long>(amps.stats.n_slices));
  std::printf("peak elements      %llu\n",
              static_cast<unsigned long long>(amps.stats.peak_live_elements));
  std::printf("wall time          %.3f s\n", summary.wall_seconds);
  return 0;
}

int cmd_oracle(const Config& cfg) {
  Circuit c = load_circuit(cfg);
  StateVector psi = statevector(c, cfg.max_qubits);
  std::vector<Bitstring> bs;
  if (cfg.sample > 0) {
    bs = sample_bitstrings(psi, cfg.sample, cfg.seed);
  } else {
    bs = load_bitstrings(cfg, c.n_qubits);
    if (bs.empty()) throw UsageError("--bitstrings or --sample is required");
  }
  std::string text;
  for (const Bitstring& b : bs) text += amplitude_line(b, psi.amplitude(b));
  if (cfg.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file(cfg.out, text);
  }
  return 0;
}

int cmd_xeb(const Config& cfg) {
  if (cfg.amplitudes.empty()) throw UsageError("--amplitudes is required");
  std::vector<AmplitudeEntry> entries = parse_amplitudes_jsonl(read_file(cfg.amplitudes));
  if (entries.empty()) throw Error("no amplitudes in " + cfg.amplitudes);
  const int n = entries.front().bitstring.size();
  std::vector<double> probs;
  for (const AmplitudeEntry& e : entries) {
    if (e.bitstring.size() != n) throw MismatchError("bitstrings of different lengths");
    probs.push_back(e.p);
  }
  XebEstimate est = xeb_estimate(probs, n);
  std::vector<double> xs;
  for (double p : probs) xs.push_back(est.dimension * p);
  const double ks = ks_statistic(xs, 1.0);
  Histogram h = histogram_rescaled(probs, n, cfg.bins, cfg.log_x);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "{\n  \"f_xeb\": %.17g,\n  \"stderr\": %.17g,\n  \"k\": %llu,\n"
                "  \"n_qubits\": %d,\n  \"N\": %.17g,\n  \"ks_statistic_f1\": %.17g\n}\n",
                est.f_xeb, est.stderr_mean, static_cast<unsigned long long>(est.k), n,
                est.dimension, ks);
  write_file(out_path(cfg, "xeb.json"), buf);
  write_file(out_path(cfg, "histogram.csv"), h.to_csv());
  std::printf("F_xeb              %.6g +- %.3g\n", est.f_xeb, est.stderr_mean);
  std::printf("KS vs F=1          %.4g (1%% critical %.4g)\n", ks,
              1.63 / std::sqrt(static_cast<double>(est.k)));
  return 0;
}

int cmd_scaling(const Config& cfg) {
  Circuit c = load_circuit(cfg);
  TensorNetwork tn = build_tensor_network(c);
  const int n = c.n_qubits;
  if (cfg.max_log2_k < 0 || cfg.max_log2_k > 30) throw UsageError("--max-log2-k must be 0..30");
  const std::uint64_t kmax = std::uint64_t{1} << cfg.max_log2_k;
  std::vector<Bitstring> bs = load_bitstrings(cfg, n);
  if (bs.empty()) bs = random_bitstrings(n, kmax, cfg.seed, false);
  ContractionOrder order;
  if (!cfg.order.empty()) {
    order = order_from_json(read_file(cfg.order), tn);
  } else {
    order = greedy_order(tn, cfg.seed);
    if (cfg.budget > 0) {
      SearchConfig sc;
      sc.loss = cfg.loss == "single" ? Loss::kSingle : Loss::kMulti;
      sc.widths_source = WidthsSource::kExpected;
      sc.expected_k = kmax;
      sc.budget = cfg.budget;
      sc.seed = cfg.seed;
      order = anneal_order(tn, order, sc).order;
    }
  }
  BlockPartition p = partition_blocks(order, tn);
  std::string csv = "k,S_k,k_times_S,ratio\n";
  for (std::uint64_t k = 1; k <= bs.size(); k *= 2) {
    std::span<const Bitstring> prefix(bs.data(), k);
    CostReport r = cost_report(p, layer_widths(p, prefix));
    char line[160];
    std::snprintf(line, sizeof line, "%llu,%llu,%llu,%.17g\n", static_cast<unsigned long long>(k),
                  static_cast<unsigned long long>(r.multi_cost),
                  static_cast<unsigned long long>(r.linear_baseline),
                  static_cast<double>(r.multi_cost) / static_cast<double>(r.linear_baseline));
    csv += line;
  }
  if (cfg.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(cfg.out, csv);
  }
  return 0;
}

int cmd_report(const Config& cfg) {
  Circuit c = load_circuit(cfg);
  TensorNetwork tn = build_tensor_network(c);
  std::vector<Bitstring> bs = load_bitstrings(cfg, c.n_qubits);
  if (cfg.order.empty()) throw UsageError("--order is required");
  ContractionOrder order = order_from_json(read_file(cfg.order), tn);
  BlockPartition p = partition_blocks(order, tn);
  LayerWidths w = report_widths(cfg, p, bs);
  CostReport r = cost_report(p, w);
  std::printf("layer  qubit  width  block_cost\n");
  for (int l = 0; l <= p.n_layers(); ++l) {
    std::printf("%5d  %5d  %5llu  %llu\n", l, l == 0 ? -1 : p.layer_order[l - 1],
                static_cast<unsigned long long>(w.w[l]),
                static_cast<unsigned long long>(p.block_costs[l]));
  }
  print_report(r);
  std::printf("max intermediate rank %d\n", max_intermediate_rank(order, tn));
  if (!cfg.out.empty()) write_file(cfg.out, cost_report_to_json(r));
  return 0;
}

// Applies "key = value" lines as option defaults so that flags still win.
void apply_config(CLI::App& app, const std::string& path) {
  for (const auto& [key, value] : parse_key_values(read_file(path))) {
    bool found = false;
    for (CLI::App* sub : app.get_subcommands({})) {
      if (CLI::Option* opt = sub->get_option_no_throw("--" + key)) {
        opt->default_val(value);
        found = true;
      }
    }
    if (!found) throw UsageError("unknown config key '" + key + "' in " + path);
  }
}

std::string config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-amplitude tensor network contraction for random quantum circuits"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  std::string config_file;
  app.add_option("--config", config_file,
                 "Flat key = value file of option defaults; command-line flags take precedence");

  auto add_circuit = [&](CLI::App* s) {
    s->add_option("--circuit", cfg.circuit, "Circuit file");
  };
  auto add_bitstrings = [&](CLI::App* s) {
    s->add_option("--bitstrings", cfg.bitstrings, "Bitstring file, one per line");
  };
  auto add_order_source = [&](CLI::App* s) {
    s->add_option("--order", cfg.order, "Order JSON from `search` (default: greedy + annealing)");
    s->add_option("--budget", cfg.budget, "Annealing proposals when no order is given")
        ->capture_default_str();
    s->add_option("--loss", cfg.loss, "Annealing loss: single or multi")->capture_default_str();
    s->add_option("--widths", cfg.widths, "Layer widths for the multi loss: exact or expected")
        ->capture_default_str();
    s->add_option("--k", cfg.k, "Bitstring count for expected widths")->capture_default_str();
  };
  auto add_seed = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  };
  auto add_out_dir = [&](CLI::App* s) {
    s->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  };

  CLI::App* gen = app.add_subcommand("generate", "Write a random grid circuit");
  gen->add_option("--qubits", cfg.qubits, "Number of qubits")->capture_default_str();
  gen->add_option("--cols", cfg.cols, "Grid columns")->capture_default_str();
  gen->add_option("--depth", cfg.depth, "Cycles of single-qubit plus fsim layers")
      ->capture_default_str();
  gen->add_flag("--no-final-layer", cfg.no_final_layer, "Omit the closing single-qubit layer");
  gen->add_option("--out", cfg.out, "Circuit output file (default: stdout)");
  gen->add_option("--bitstrings-out", cfg.bitstrings_out, "Also write --k random bitstrings here");
  gen->add_option("--k", cfg.k, "Number of random bitstrings")->capture_default_str();
  add_seed(gen);

  CLI::App* search = app.add_subcommand("search", "Anneal a contraction order; writes order.json and report.json");
  add_circuit(search);
  add_bitstrings(search);
  add_order_source(search);
  add_seed(search);
  add_out_dir(search);

  CLI::App* plan = app.add_subcommand("plan", "Build the reuse tree and memory plan; writes plan.json");
  add_circuit(plan);
  add_bitstrings(plan);
  add_order_source(plan);
  add_seed(plan);
  plan->add_option("--max-rank", cfg.max_rank, "Slice until every intermediate has at most this rank");
  add_out_dir(plan);

  CLI::App* sim = app.add_subcommand("simulate", "Compute amplitudes; writes amplitudes.jsonl and summary.json");
  add_circuit(sim);
  add_bitstrings(sim);
  add_order_source(sim);
  add_seed(sim);
  sim->add_option("--max-rank", cfg.max_rank, "Slice until every intermediate has at most this rank");
  sim->add_option("--max-elements", cfg.max_elements, "Largest intermediate tensor in elements")
      ->capture_default_str();
  sim->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  sim->add_option("--precision", cfg.precision, "double or single")->capture_default_str();
  add_out_dir(sim);

  CLI::App* orc = app.add_subcommand("oracle", "Statevector amplitudes in the simulate output format");
  add_circuit(orc);
  add_bitstrings(orc);
  orc->add_option("--sample", cfg.sample, "Draw this many bitstrings from |psi|^2 instead");
  add_seed(orc);
  orc->add_option("--max-qubits", cfg.max_qubits, "Refuse larger circuits")->capture_default_str();
  orc->add_option("--out", cfg.out, "Output file (default: stdout)");

  CLI::App* xeb = app.add_subcommand("xeb", "XEB fidelity and Porter-Thomas histogram; writes xeb.json and histogram.csv");
  xeb->add_option("--amplitudes", cfg.amplitudes, "Amplitude JSON-lines file");
  xeb->add_option("--bins", cfg.bins, "Histogram bins")->capture_default_str();
  xeb->add_flag("--log-x", cfg.log_x, "Log-spaced bins");
  add_out_dir(xeb);

  CLI::App* scaling = app.add_subcommand("scaling", "Cost-model sweep of S_k over k = 1, 2, 4, ...");
  add_circuit(scaling);
  add_bitstrings(scaling);
  scaling->add_option("--order", cfg.order, "Order JSON (default: greedy + annealing)");
  scaling->add_option("--budget", cfg.budget, "Annealing proposals when no order is given")
      ->capture_default_str();
  scaling->add_option("--loss", cfg.loss, "Annealing loss: single or multi")->capture_default_str();
  scaling->add_option("--max-log2-k", cfg.max_log2_k, "Largest k is 2^this")->capture_default_str();
  add_seed(scaling);
  scaling->add_option("--out", cfg.out, "CSV output file (default: stdout)");

  CLI::App* rep = app.add_subcommand("report", "Per-layer widths and block costs of an order");
  add_circuit(rep);
  add_bitstrings(rep);
  rep->add_option("--order", cfg.order, "Order JSON");
  rep->add_option("--k", cfg.k, "Bitstring count for expected widths without --bitstrings")
      ->capture_default_str();
  rep->add_option("--out", cfg.out, "Also write the cost report JSON here");

  try {
    if (std::string path = config_path(argc, argv); !path.empty()) apply_config(app, path);
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(cfg);
    if (search->parsed()) return cmd_search(cfg);
    if (plan->parsed()) return cmd_plan(cfg);
    if (sim->parsed()) return cmd_simulate(cfg);
    if (orc->parsed()) return cmd_oracle(cfg);
    if (xeb->parsed()) return cmd_xeb(cfg);
    if (scaling->parsed()) return cmd_scaling(cfg);
    if (rep->parsed()) return cmd_report(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

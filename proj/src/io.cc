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

#include "matnc/io.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "matnc/error.h"

namespace matnc {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

json report_json(const CostReport& r) {
  return {{"single_cost", r.single_cost},
          {"multi_cost", r.multi_cost},
          {"k", r.k},
          {"linear_baseline", r.linear_baseline},
          {"reuse_ratio", r.reuse_ratio},
          {"block_costs", r.block_costs}};
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("cannot write " + path);
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fingerprint);
  return buf;
}

std::string order_to_json(const ContractionOrder& order, const TensorNetwork& tn) {
  json steps = json::array();
  for (const ContractionStep& s : order.steps) steps.push_back({s.lhs, s.rhs, s.result});
  json j = {{"num_tensors", order.num_tensors},
            {"fingerprint", fingerprint_hex(tn.fingerprint())},
            {"steps", steps}};
  return j.dump(1) + "\n";
}

ContractionOrder order_from_json(std::string_view text, const TensorNetwork& tn) {
  ContractionOrder order;
  std::string fp;
  try {
    json j = json::parse(text);
    order.num_tensors = j.at("num_tensors").get<int>();
    fp = j.at("fingerprint").get<std::string>();
    for (const json& s : j.at("steps")) {
      if (!s.is_array() || s.size() != 3) throw ParseError("order step must be [lhs, rhs, result]");
      order.steps.push_back({s[0].get<int>(), s[1].get<int>(), s[2].get<int>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("order file: ") + e.what());
  }
  if (fp != fingerprint_hex(tn.fingerprint())) {
    throw MismatchError("order fingerprint " + fp + " does not match circuit " +
                        fingerprint_hex(tn.fingerprint()));
  }
  validate_order(order, tn);
  return order;
}

std::string cost_report_to_json(const CostReport& report) {
  return report_json(report).dump(2) + "\n";
}

std::string plan_to_json(const ReuseTree& tree, const MemoryPlan& plan,
                         std::uint64_t breadth_first_peak, const CostReport& report,
                         const SliceSpec& slices) {
  const double single = static_cast<double>(std::max<std::uint64_t>(plan.single_amplitude_peak, 1));
  json j = {
      {"n_qubits", tree.n_qubits},
      {"layer_order", tree.layer_order},
      {"widths", tree.nodes_per_depth()},
      {"nodes", tree.nodes.size()},
      {"distinct_bitstrings", tree.distinct.size()},
      {"peak_elements", plan.peak_elements},
      {"peak_bytes", plan.peak_bytes()},
      {"single_amplitude_peak", plan.single_amplitude_peak},
      {"peak_ratio", static_cast<double>(plan.peak_elements) / single},
      {"breadth_first_peak", breadth_first_peak},
      {"breadth_first_ratio", static_cast<double>(breadth_first_peak) / single},
      {"unread_cached_tensors", plan.unread_cached_tensors},
      {"sliced_ids", slices.sliced_ids},
      {"n_slices", slices.n_slices},
      {"max_intermediate_rank", slices.max_intermediate_rank},
      {"cost", report_json(report)},
  };
  return j.dump(2) + "\n";
}

std::string amplitude_line(const Bitstring& bitstring, std::complex<double> amplitude) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "\", \"re\": %.17g, \"im\": %.17g, \"p\": %.17g}\n",
                amplitude.real(), amplitude.imag(), std::norm(amplitude));
  return "{\"bitstring\": \"" + bitstring.str() + buf;
}

std::string amplitudes_to_jsonl(const AmplitudeSet& amplitudes) {
  std::string out;
  for (const AmplitudeEntry& e : amplitudes.entries) out += amplitude_line(e.bitstring, e.amplitude);
  return out;
}

std::vector<AmplitudeEntry> parse_amplitudes_jsonl(std::string_view text) {
  std::vector<AmplitudeEntry> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      AmplitudeEntry e;
      e.bitstring = Bitstring(j.at("bitstring").get<std::string>());
      e.amplitude = {j.at("re").get<double>(), j.at("im").get<double>()};
      e.p = j.contains("p") ? j.at("p").get<double>() : std::norm(e.amplitude);
      out.push_back(std::move(e));
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string summary_to_json(const AmplitudeSet& amplitudes, const RunSummary& s) {
  json j = {
      {"n_qubits", amplitudes.n_qubits},
      {"k", amplitudes.entries.size()},
      {"fingerprint", fingerprint_hex(amplitudes.fingerprint)},
      {"single_cost", s.report.single_cost},
      {"multi_cost", s.report.multi_cost},
      {"reuse_ratio", s.report.reuse_ratio},
      {"multiplications", amplitudes.stats.multiplications},
      {"n_slices", amplitudes.stats.n_slices},
      {"sliced_ids", s.slices.sliced_ids},
      {"max_result_rank", amplitudes.stats.max_result_rank},
      {"peak_live_elements", amplitudes.stats.peak_live_elements},
      {"planned_peak_elements", s.plan.peak_elements},
      {"planned_peak_bytes", s.plan.peak_bytes()},
      {"single_amplitude_peak", s.plan.single_amplitude_peak},
      {"workers", s.workers},
      {"wall_seconds", s.wall_seconds},
  };
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string line(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

}  // namespace matnc

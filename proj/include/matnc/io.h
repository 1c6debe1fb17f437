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

#ifndef MATNC_IO_H_
#define MATNC_IO_H_

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "matnc/cost_model.h"
#include "matnc/executor.h"
#include "matnc/order_search.h"
#include "matnc/reuse_plan.h"

namespace matnc {

// Throws Error when the file cannot be read or written.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::string fingerprint_hex(std::uint64_t fingerprint);

// {"num_tensors": T, "fingerprint": "...", "steps": [[lhs, rhs, result], ...]}
std::string order_to_json(const ContractionOrder& order, const TensorNetwork& tn);

// Throws ParseError on malformed input and MismatchError when the order
// was made for a different network.
ContractionOrder order_from_json(std::string_view text, const TensorNetwork& tn);

std::string cost_report_to_json(const CostReport& report);

// Node counts per depth, widths, memory plan, and costs.
std::string plan_to_json(const ReuseTree& tree, const MemoryPlan& plan,
                         std::uint64_t breadth_first_peak, const CostReport& report,
                         const SliceSpec& slices);

// {"bitstring": "...", "re": x, "im": y, "p": z} with 17 significant digits.
std::string amplitude_line(const Bitstring& bitstring, std::complex<double> amplitude);
std::string amplitudes_to_jsonl(const AmplitudeSet& amplitudes);

// Throws ParseError naming the line.
std::vector<AmplitudeEntry> parse_amplitudes_jsonl(std::string_view text);

struct RunSummary {
  CostReport report;
  MemoryPlan plan;
  SliceSpec slices;
  int workers = 1;
  double wall_seconds = 0;
};

std::string summary_to_json(const AmplitudeSet& amplitudes, const RunSummary& summary);

// Flat "key = value" lines; '#' starts a comment. Throws ParseError.
std::map<std::string, std::string> parse_key_values(std::string_view text);

}  // namespace matnc

#endif  // MATNC_IO_H_

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

#include "matnc/xeb.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "matnc/error.h"

namespace matnc {

XebEstimate xeb_estimate(std::span<const double> probs, int n_qubits) {
  if (probs.size() < 2) throw InvalidArgument("xeb_estimate needs at least two samples");
  XebEstimate e;
  e.k = probs.size();
  e.n_qubits = n_qubits;
  e.dimension = std::ldexp(1.0, n_qubits);
  // Two passes keep the variance accurate when x is tightly clustered.
  double sum = 0;
  for (double p : probs) {
    if (!(p >= 0)) throw InvalidArgument("probabilities must be non-negative");
    sum += e.dimension * p;
  }
  const double mean = sum / static_cast<double>(e.k);
  double ss = 0;
  for (double p : probs) {
    const double d = e.dimension * p - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(e.k - 1);
  e.f_xeb = mean - 1.0;
  e.stderr_mean = std::sqrt(var / static_cast<double>(e.k));
  return e;
}

double porter_thomas_pdf(double x, double f_xeb) {
  if (!(x >= 0)) throw InvalidArgument("porter_thomas_pdf needs x >= 0");
  if (f_xeb < 0 || f_xeb > 1) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      std::clog << "warning: fidelity " << f_xeb << " outside [0, 1]\n";
    }
  }
  return (f_xeb * x + 1.0 - f_xeb) * std::exp(-x);
}

double porter_thomas_cdf(double x, double f_xeb) {
  if (x <= 0) return 0;
  return -std::expm1(-x) - f_xeb * x * std::exp(-x);
}

double ks_statistic(std::vector<double> xs, double f_xeb) {
  if (xs.empty()) throw InvalidArgument("ks_statistic needs samples");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = porter_thomas_cdf(xs[i], f_xeb);
    d = std::max({d, static_cast<double>(i + 1) / n - c, c - static_cast<double>(i) / n});
  }
  return d;
}

std::string Histogram::to_csv() const {
  std::string out = "center,empirical_density,theory_density\n";
  char line[128];
  for (std::size_t b = 0; b < centers.size(); ++b) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", centers[b], empirical_density[b],
                  theory_density[b]);
    out += line;
  }
  return out;
}

Histogram histogram_rescaled(std::span<const double> probs, int n_qubits, int bins,
                             bool log_x) {
  if (probs.empty()) throw InvalidArgument("histogram needs at least one sample");
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  const double dim = std::ldexp(1.0, n_qubits);
  std::vector<double> xs;
  xs.reserve(probs.size());
  for (double p : probs) {
    if (!(p >= 0)) throw InvalidArgument("probabilities must be non-negative");
    xs.push_back(dim * p);
  }
  Histogram h;
  h.f_xeb = probs.size() >= 2 ? xeb_estimate(probs, n_qubits).f_xeb : 0.0;

  double lo = *std::min_element(xs.begin(), xs.end());
  double hi = *std::max_element(xs.begin(), xs.end());
  if (log_x) {
    double smallest_positive = 0;
    for (double x : xs) {
      if (x > 0 && (smallest_positive == 0 || x < smallest_positive)) smallest_positive = x;
    }
    if (smallest_positive == 0) smallest_positive = 1;
    lo = smallest_positive;
    hi = std::max(hi, lo);
  }
  if (hi <= lo) {
    hi = log_x ? lo * 2 : lo + 1;
  }
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) {
    const double t = static_cast<double>(b) / bins;
    h.edges[b] = log_x ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  h.edges.back() = hi;

  std::vector<std::uint64_t> counts(bins, 0);
  for (double x : xs) {
    if (x < lo) x = lo;  // zero probabilities land in the first log bin
    auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
    int b = static_cast<int>(it - h.edges.begin()) - 1;
    b = std::clamp(b, 0, bins - 1);
    ++counts[b];
  }
  const double total = static_cast<double>(xs.size());
  for (int b = 0; b < bins; ++b) {
    const double a = h.edges[b], c = h.edges[b + 1];
    const double center = log_x ? std::sqrt(a * c) : 0.5 * (a + c);
    h.centers.push_back(center);
    h.empirical_density.push_back(static_cast<double>(counts[b]) / (total * (c - a)));
    h.theory_density.push_back(porter_thomas_pdf(center, h.f_xeb));
  }
  return h;
}

}  // namespace matnc

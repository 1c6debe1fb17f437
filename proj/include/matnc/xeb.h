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

#ifndef MATNC_XEB_H_
#define MATNC_XEB_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace matnc {

struct XebEstimate {
  double f_xeb = 0;
  double stderr_mean = 0;
  std::uint64_t k = 0;
  int n_qubits = 0;
  // 2^n as a double.
  double dimension = 0;
};

// Linear XEB: mean(N p) - 1 with the sample standard error of N p.
// Throws InvalidArgument when fewer than two probabilities are given or
// one is negative.
XebEstimate xeb_estimate(std::span<const double> probs, int n_qubits);

// (F x + 1 - F) e^-x. Throws InvalidArgument for negative x; an F outside
// [0, 1] is evaluated after a one-time warning on stderr.
double porter_thomas_pdf(double x, double f_xeb);

// Integral of porter_thomas_pdf from 0 to x: 1 - e^-x (1 + F x).
double porter_thomas_cdf(double x, double f_xeb);

// Kolmogorov-Smirnov distance between the empirical law of `xs` and
// porter_thomas_cdf(., f_xeb).
double ks_statistic(std::vector<double> xs, double f_xeb);

struct Histogram {
  std::vector<double> edges;
  std::vector<double> centers;
  // Fraction of samples per unit x.
  std::vector<double> empirical_density;
  std::vector<double> theory_density;
  double f_xeb = 0;

  std::string to_csv() const;
};

// Histogram of x = N p. Log-spaced bins use geometric centers; the theory
// curve uses F from xeb_estimate (0 when fewer than two samples). Throws
// InvalidArgument for empty input or bins < 1.
Histogram histogram_rescaled(std::span<const double> probs, int n_qubits, int bins,
                             bool log_x);

}  // namespace matnc

#endif  // MATNC_XEB_H_

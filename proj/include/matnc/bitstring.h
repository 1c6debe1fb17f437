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

#ifndef MATNC_BITSTRING_H_
#define MATNC_BITSTRING_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace matnc {

// Measurement outcome over n qubits. Character q is the value of qubit q,
// so the leftmost character is qubit 0.
class Bitstring {
 public:
  Bitstring() = default;
  // Throws ParseError on characters other than '0' and '1'.
  explicit Bitstring(std::string bits);

  // Big-endian: qubit 0 is the most significant bit of `index`.
  static Bitstring from_index(std::uint64_t index, int n_qubits);

  int size() const { return static_cast<int>(bits_.size()); }
  int bit(int qubit) const { return bits_[qubit] - '0'; }
  const std::string& str() const { return bits_; }
  // Requires size() <= 64.
  std::uint64_t to_index() const;

  friend auto operator<=>(const Bitstring&, const Bitstring&) = default;

 private:
  std::string bits_;
};

// One bitstring per non-empty line; every line must have `n_qubits`
// characters. Duplicates are kept.
std::vector<Bitstring> parse_bitstrings(std::string_view text, int n_qubits);

std::string format_bitstrings(const std::vector<Bitstring>& bitstrings);

// `k` uniformly random bitstrings. With `distinct`, sampling is without
// replacement and k must not exceed 2^n.
std::vector<Bitstring> random_bitstrings(int n_qubits, std::size_t k,
                                         std::uint64_t seed, bool distinct);

}  // namespace matnc

template <>
struct std::hash<matnc::Bitstring> {
  std::size_t operator()(const matnc::Bitstring& b) const noexcept {
    return std::hash<std::string>()(b.str());
  }
};

#endif  // MATNC_BITSTRING_H_

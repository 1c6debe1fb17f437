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

#include "matnc/bitstring.h"

#include <unordered_set>

#include "matnc/error.h"
#include "matnc/rng.h"

namespace matnc {

Bitstring::Bitstring(std::string bits) : bits_(std::move(bits)) {
  for (char c : bits_) {
    if (c != '0' && c != '1') {
      throw ParseError("bitstring '" + bits_ + "' contains a character other than 0/1");
    }
  }
}

Bitstring Bitstring::from_index(std::uint64_t index, int n_qubits) {
  std::string bits(static_cast<std::size_t>(n_qubits), '0');
  for (int q = n_qubits - 1; q >= 0; --q) {
    bits[q] = static_cast<char>('0' + (index & 1));
    index >>= 1;
  }
  return Bitstring(std::move(bits));
}

std::uint64_t Bitstring::to_index() const {
  if (bits_.size() > 64) throw InvalidArgument("bitstring longer than 64 bits");
  std::uint64_t index = 0;
  for (char c : bits_) index = (index << 1) | static_cast<std::uint64_t>(c - '0');
  return index;
}

std::vector<Bitstring> parse_bitstrings(std::string_view text, int n_qubits) {
  std::vector<Bitstring> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty()) continue;
    if (static_cast<int>(line.size()) != n_qubits) {
      throw ParseError("bitstrings line " + std::to_string(line_no) + ": length " +
                       std::to_string(line.size()) + ", expected " +
                       std::to_string(n_qubits));
    }
    try {
      out.emplace_back(std::string(line));
    } catch (const ParseError& e) {
      throw ParseError("bitstrings line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string format_bitstrings(const std::vector<Bitstring>& bitstrings) {
  std::string out;
  for (const auto& b : bitstrings) {
    out += b.str();
    out += '\n';
  }
  return out;
}

std::vector<Bitstring> random_bitstrings(int n_qubits, std::size_t k,
                                         std::uint64_t seed, bool distinct) {
  Rng rng(seed);
  auto draw = [&] {
    std::string bits(static_cast<std::size_t>(n_qubits), '0');
    std::uint64_t word = 0;
    for (int q = 0; q < n_qubits; ++q) {
      if (q % 64 == 0) word = rng.next();
      bits[q] = static_cast<char>('0' + ((word >> (q % 64)) & 1));
    }
    return Bitstring(std::move(bits));
  };
  std::vector<Bitstring> out;
  out.reserve(k);
  if (!distinct) {
    for (std::size_t i = 0; i < k; ++i) out.push_back(draw());
    return out;
  }
  if (n_qubits < 64 && k > (std::uint64_t{1} << n_qubits)) {
    throw InvalidArgument("cannot draw " + std::to_string(k) + " distinct " +
                          std::to_string(n_qubits) + "-bit strings");
  }
  std::unordered_set<Bitstring> seen;
  while (out.size() < k) {
    Bitstring b = draw();
    if (seen.insert(b).second) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace matnc

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

#ifndef MATNC_ERROR_H_
#define MATNC_ERROR_H_

#include <stdexcept>
#include <string>

namespace matnc {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shared index ids with different dimensions.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A tensor would exceed the configured element cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Unknown index id, or a fixed value out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Malformed circuit, bitstring, order or amplitude input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structural mismatch between objects that must agree (order vs network,
// tree vs partition, bitstring length vs qubit count).
class MismatchError : public Error {
 public:
  using Error::Error;
};

// Slicing target cannot be reached.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Invalid arguments to a public operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Failure during parallel execution; the message names the task.
class RunError : public Error {
 public:
  using Error::Error;
};

}  // namespace matnc

#endif  // MATNC_ERROR_H_

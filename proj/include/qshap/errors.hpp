// Copyright 2026 The qshap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qshap {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Problem size exceeds an enumeration or simulation limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Register width too small to hold an intermediate value.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Quantum state does not satisfy an operation's precondition.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Oracle or callback returned a value violating its contract.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Random generation gave up after too many rejections.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or specification.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qshap

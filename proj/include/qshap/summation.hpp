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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qshap {

/// Streaming pairwise (cascade) summation. Partial sums of 2^k consecutive
/// terms are combined like a binary counter, so the rounding error grows
/// with log2 of the term count.
class PairwiseSum {
 public:
  void add(double x) {
    double carry = x;
    std::uint64_t c = count_++;
    unsigned level = 0;
    while (c & 1U) {
      carry += slots_[level];
      slots_[level] = 0.0;
      c >>= 1;
      ++level;
    }
    slots_[level] = carry;
  }

  double value() const {
    double total = 0.0;
    std::uint64_t c = count_;
    for (unsigned level = 0; c != 0; ++level, c >>= 1) {
      if (c & 1U) total += slots_[level];
    }
    return total;
  }

  std::uint64_t count() const { return count_; }

 private:
  std::array<double, 65> slots_{};
  std::uint64_t count_ = 0;
};

inline double pairwise_sum(std::span<const double> xs) {
  PairwiseSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace qshap

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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qshap/game.hpp"
#include "qshap/rng.hpp"

namespace qshap::testing {

using Rational = boost::multiprecision::cpp_rational;

/// Table game with values drawn from {0, 1/4, ..., 1} so that every sum is
/// exact in binary floating point; V(∅) = 0.
inline TableGame random_table_game(unsigned n, Rng& rng, bool quarter_grid = true) {
  std::vector<double> v(std::size_t{1} << n);
  for (std::size_t m = 1; m < v.size(); ++m) {
    v[m] = quarter_grid ? static_cast<double>(uniform_below(rng, 5)) / 4.0 : uniform_real(rng, -1.0, 2.0);
  }
  return TableGame(n, std::move(v));
}

/// Voting game with weights in [0, max_weight] and a quota in [1, total].
inline WeightedVotingGame random_voting_game(unsigned n, Rng& rng, std::uint64_t max_weight = 6) {
  std::vector<std::uint64_t> w(n);
  std::uint64_t total = 0;
  for (auto& x : w) {
    x = uniform_below(rng, max_weight + 1);
    total += x;
  }
  const std::uint64_t quota = 1 + uniform_below(rng, std::max<std::uint64_t>(total, 1));
  return WeightedVotingGame(std::move(w), quota);
}

/// Shapley values from the ordering definition: average of the marginal
/// contribution over all n! orderings.
template <class G>
std::vector<double> permutation_shapley(const G& game) {
  const unsigned n = game.n_players();
  std::vector<unsigned> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::vector<double> sum(n, 0.0);
  double count = 0.0;
  do {
    std::uint64_t mask = 0;
    double prev = game.value(Coalition(0, n));
    for (unsigned p : order) {
      mask |= std::uint64_t{1} << p;
      const double cur = game.value(Coalition(mask, n));
      sum[p] += cur - prev;
      prev = cur;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& s : sum) s /= count;
  return sum;
}

inline Rational binomial(unsigned n, unsigned k) {
  Rational c = 1;
  for (unsigned j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

/// gamma(n, m) = 1 / (C(n, m)(n + 1)) in exact arithmetic.
inline Rational rational_gamma(unsigned n, unsigned m) { return Rational(1) / (binomial(n, m) * (n + 1)); }

/// Exact-rational Shapley value of a game whose values are rationals.
inline Rational rational_shapley(const std::vector<Rational>& values, unsigned n_players, unsigned i) {
  Rational total = 0;
  const unsigned n = n_players - 1;
  for (std::uint64_t s = 0; s < values.size(); ++s) {
    if ((s >> i) & 1U) continue;
    const auto m = static_cast<unsigned>(std::popcount(s));
    total += rational_gamma(n, m) * (values[s | (std::uint64_t{1} << i)] - values[s]);
  }
  return total;
}

}  // namespace qshap::testing

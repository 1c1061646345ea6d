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
#include <cmath>
#include <cstdint>
#include <vector>

#include "qshap/coalition.hpp"
#include "qshap/errors.hpp"
#include "qshap/game.hpp"
#include "qshap/summation.hpp"

namespace qshap {

/// Shapley weight 1 / (C(n, m) (n + 1)).
inline double gamma_weight(unsigned n, unsigned m) {
  if (n > Coalition::kMaxPlayers || m > n) throw DomainError("gamma_weight needs 0 <= m <= n <= 63");
  // Product of m ratios k / (n - m + k), then the 1 / (n + 1) factor.
  const unsigned k_max = m < n - m ? m : n - m;
  double g = 1.0 / (n + 1.0);
  for (unsigned k = 1; k <= k_max; ++k) {
    g *= static_cast<double>(k) / static_cast<double>(n - k_max + k);
  }
  return g;
}

/// Largest game for which exact enumeration is attempted.
inline constexpr unsigned kMaxExactPlayers = 25;

/// Exact Shapley value of player i. Terms are grouped by coalition size and
/// summed pairwise inside each group, then combined in ascending size.
template <CooperativeGame G>
double exact_shapley(const G& game, unsigned i) {
  const unsigned n_players = game.n_players();
  if (n_players > kMaxExactPlayers) throw CapacityError("exact enumeration supports at most 25 players");
  if (i >= n_players) throw DomainError("player index out of range");
  if (is_degenerate(game)) return 0.0;

  const PlayerExclusion view(n_players, i);
  const unsigned n = view.others();
  std::vector<PairwiseSum> by_size(n + 1);
  for (std::uint64_t h = 0; h < view.reduced_count(); ++h) {
    const double delta = game.value(view.expand(h, Side::plus)) - game.value(view.expand(h, Side::minus));
    by_size[static_cast<unsigned>(std::popcount(h))].add(delta);
  }
  PairwiseSum total;
  for (unsigned m = 0; m <= n; ++m) total.add(gamma_weight(n, m) * by_size[m].value());
  return total.value();
}

struct ShapleyVector {
  std::vector<double> values;

  double sum() const { return pairwise_sum(values); }
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Exact Shapley values of every player. Throws std::logic_error if the
/// efficiency identity sum = V(F) - V(∅) fails beyond rounding.
template <CooperativeGame G>
ShapleyVector exact_shapley_all(const G& game) {
  const unsigned n = game.n_players();
  ShapleyVector out;
  out.values.reserve(n);
  for (unsigned i = 0; i < n; ++i) out.values.push_back(exact_shapley(game, i));
  if (n > 0 && !is_degenerate(game)) {
    const double target = game.value(Coalition::full(n)) - game.value(Coalition::empty(n));
    const double scale = std::max({1.0, std::abs(game.v_max()), std::abs(game.v_min())});
    if (std::abs(out.sum() - target) > 1e-9 * scale * n) {
      throw std::logic_error("efficiency identity violated");
    }
  }
  return out;
}

/// Value mapped into [0, 1]: V(S_h ∪ {i}) for plus, V(S_h) for minus.
/// Degenerate games (v_max == v_min) map to 0; check is_degenerate().
template <CooperativeGame G>
double normalized_value(const G& game, const Coalition& h, unsigned i, Side side) {
  if (i >= game.n_players()) throw DomainError("player index out of range");
  if (h.contains(i)) throw DomainError("coalition must not contain the player");
  if (is_degenerate(game)) return 0.0;
  const double v = game.value(side == Side::plus ? h.with(i) : h);
  return (v - game.v_min()) / (game.v_max() - game.v_min());
}

/// Normalized values for every reduced mask over the players other than i,
/// indexed as the player register sees them.
template <CooperativeGame G>
std::vector<double> normalized_table(const G& game, unsigned i, Side side) {
  const PlayerExclusion view(game.n_players(), i);
  std::vector<double> out(view.reduced_count());
  for (std::uint64_t h = 0; h < out.size(); ++h) {
    out[h] = normalized_value(game, view.expand(h, Side::minus), i, side);
  }
  return out;
}

/// True when adding any single player never lowers the value.
template <CooperativeGame G>
bool is_monotonic(const G& game) {
  const unsigned n = game.n_players();
  if (n > 20) throw CapacityError("monotonicity check supports at most 20 players");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> v(count);
  for (std::uint64_t m = 0; m < count; ++m) v[m] = game.value(Coalition(m, n));
  for (std::uint64_t m = 0; m < count; ++m) {
    for (unsigned j = 0; j < n; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (!(m & bit) && v[m | bit] < v[m]) return false;
    }
  }
  return true;
}

}  // namespace qshap

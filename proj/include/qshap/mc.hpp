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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qshap/coalition.hpp"
#include "qshap/errors.hpp"
#include "qshap/game.hpp"
#include "qshap/rng.hpp"

namespace qshap {

enum class McStrategy { permutation, size_stratified };

inline const char* to_string(McStrategy s) {
  return s == McStrategy::permutation ? "mc-permutation" : "mc-stratified";
}

struct McConfig {
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  McStrategy strategy = McStrategy::permutation;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;      ///< sample standard deviation / sqrt(samples)
  std::uint64_t queries = 0;   ///< value-function evaluations
};

namespace detail {

/// Random coalition drawn as the predecessors of `i` in a uniform ordering.
inline std::uint64_t permutation_predecessors(Rng& rng, unsigned n_players, unsigned i,
                                              std::vector<unsigned>& order) {
  std::iota(order.begin(), order.end(), 0U);
  for (unsigned k = n_players; k > 1; --k) {
    const auto r = static_cast<unsigned>(uniform_below(rng, k));
    std::swap(order[k - 1], order[r]);
  }
  std::uint64_t mask = 0;
  for (unsigned j : order) {
    if (j == i) break;
    mask |= std::uint64_t{1} << j;
  }
  return mask;
}

/// Size m uniform in [0, n], then a uniform m-subset of the other players.
inline std::uint64_t stratified_coalition(Rng& rng, unsigned n_players, unsigned i, std::vector<unsigned>& others) {
  others.clear();
  for (unsigned j = 0; j < n_players; ++j) {
    if (j != i) others.push_back(j);
  }
  const auto n = static_cast<unsigned>(others.size());
  const auto m = static_cast<unsigned>(uniform_below(rng, n + 1));
  std::uint64_t mask = 0;
  for (unsigned k = 0; k < m; ++k) {  // partial Fisher-Yates
    const auto r = static_cast<unsigned>(k + uniform_below(rng, n - k));
    std::swap(others[k], others[r]);
    mask |= std::uint64_t{1} << others[k];
  }
  return mask;
}

}  // namespace detail

/// Monte Carlo estimate of player i's Shapley value. Both strategies are
/// unbiased; each sample costs two value queries.
template <CooperativeGame G>
McEstimate mc_shapley(const G& game, unsigned i, const McConfig& config) {
  const unsigned n = game.n_players();
  if (i >= n) throw DomainError("player index out of range");
  if (config.samples == 0) throw DomainError("need at least one sample");
  Rng rng(config.seed);
  std::vector<unsigned> scratch(n);
  double mean = 0.0;
  double m2 = 0.0;  // Welford
  for (std::uint64_t s = 0; s < config.samples; ++s) {
    const std::uint64_t mask = config.strategy == McStrategy::permutation
                                   ? detail::permutation_predecessors(rng, n, i, scratch)
                                   : detail::stratified_coalition(rng, n, i, scratch);
    const Coalition without(mask, n);
    const double x = game.value(without.with(i)) - game.value(without);
    const double d = x - mean;
    mean += d / static_cast<double>(s + 1);
    m2 += d * (x - mean);
  }
  McEstimate out;
  out.estimate = mean;
  out.queries = 2 * config.samples;
  if (config.samples > 1) {
    const double var = m2 / static_cast<double>(config.samples - 1);
    out.std_error = std::sqrt(var / static_cast<double>(config.samples));
  }
  return out;
}

}  // namespace qshap

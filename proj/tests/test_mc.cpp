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

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "qshap/exact.hpp"
#include "qshap/mc.hpp"
#include "test_support.hpp"

namespace qshap {
namespace {

constexpr McStrategy kStrategies[] = {McStrategy::permutation, McStrategy::size_stratified};

TEST(MonteCarlo, LargeSampleWithinFourStandardErrors) {
  const WeightedVotingGame g({4, 3, 2, 2, 1, 1}, 7);
  for (McStrategy s : kStrategies) {
    for (unsigned i = 0; i < 6; ++i) {
      const McEstimate e = mc_shapley(g, i, McConfig{100000, 1000 + i, s});
      EXPECT_LE(std::abs(e.estimate - exact_shapley(g, i)), 4 * e.std_error) << to_string(s) << " i=" << i;
      EXPECT_EQ(e.queries, 200000U);
    }
  }
}

TEST(MonteCarlo, ConstantMarginalHasZeroError) {
  // Additive game: the marginal of player i is always its own weight.
  std::vector<double> v(16);
  const double w[4] = {0.1, 0.2, 0.3, 0.4};
  for (std::uint64_t m = 0; m < 16; ++m) {
    for (unsigned j = 0; j < 4; ++j) v[m] += (m >> j & 1U) ? w[j] : 0.0;
  }
  const TableGame g(4, v);
  for (McStrategy s : kStrategies) {
    const McEstimate e = mc_shapley(g, 2, McConfig{500, 3, s});
    EXPECT_NEAR(e.estimate, 0.3, 1e-15);
    EXPECT_NEAR(e.std_error, 0.0, 1e-15);
  }
}

TEST(MonteCarlo, CoalitionDistributionMatchesShapleyWeights) {
  const unsigned n_players = 4;
  const unsigned i = 1;
  const int draws = 200000;
  for (McStrategy s : kStrategies) {
    Rng rng(55);
    std::vector<unsigned> scratch(n_players);
    std::map<std::uint64_t, int> counts;
    for (int d = 0; d < draws; ++d) {
      const std::uint64_t mask = s == McStrategy::permutation
                                     ? detail::permutation_predecessors(rng, n_players, i, scratch)
                                     : detail::stratified_coalition(rng, n_players, i, scratch);
      ASSERT_EQ(mask >> i & 1U, 0U);
      ++counts[mask];
    }
    EXPECT_EQ(counts.size(), 8U);
    for (const auto& [mask, c] : counts) {
      const double p = gamma_weight(3, static_cast<unsigned>(std::popcount(mask)));
      const double sigma = std::sqrt(draws * p * (1 - p));
      EXPECT_LE(std::abs(c - draws * p), 4 * sigma) << to_string(s) << " mask=" << mask;
    }
  }
}

TEST(MonteCarlo, ErrorDecaysAsInverseSquareRoot) {
  Rng rng(12);
  const WeightedVotingGame g = testing::random_voting_game(5, rng);
  const double exact = exact_shapley(g, 0);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::uint64_t n = 16; n <= 4096; n *= 4) {
    double err = 0.0;
    const int runs = 400;
    for (int r = 0; r < runs; ++r) err += std::abs(mc_shapley(g, 0, McConfig{n, mix_seed(n, r, 7)}).estimate - exact);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(err / runs));
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
}

TEST(MonteCarlo, Unbiased) {
  const TableGame g(3, {0.0, 0.2, 0.5, 0.6, 0.1, 0.9, 0.4, 1.0});
  const double exact = exact_shapley(g, 2);
  for (McStrategy s : kStrategies) {
    double sum = 0.0;
    double sum_sq = 0.0;
    const int batches = 1000;
    for (int b = 0; b < batches; ++b) {
      const double e = mc_shapley(g, 2, McConfig{100, mix_seed(9, b, 0), s}).estimate;
      sum += e;
      sum_sq += e * e;
    }
    const double mean = sum / batches;
    const double sd = std::sqrt((sum_sq / batches - mean * mean) / (batches - 1));
    EXPECT_LE(std::abs(mean - exact), 4 * sd) << to_string(s);
  }
}

TEST(MonteCarlo, DeterministicPerSeed) {
  const WeightedVotingGame g({3, 2, 1}, 4);
  for (McStrategy s : kStrategies) {
    const McEstimate a = mc_shapley(g, 1, McConfig{300, 77, s});
    const McEstimate b = mc_shapley(g, 1, McConfig{300, 77, s});
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
  }
  EXPECT_NE(mc_shapley(g, 1, McConfig{300, 77}).estimate, mc_shapley(g, 1, McConfig{300, 78}).estimate);
}

TEST(MonteCarlo, RejectsBadArguments) {
  const WeightedVotingGame g({3, 2, 1}, 4);
  EXPECT_THROW(mc_shapley(g, 3, McConfig{}), DomainError);
  EXPECT_THROW(mc_shapley(g, 0, McConfig{0, 1}), DomainError);
  EXPECT_EQ(mc_shapley(g, 0, McConfig{1, 1}).std_error, 0.0);
}

}  // namespace
}  // namespace qshap

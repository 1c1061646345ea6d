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

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "qshap/coalition.hpp"
#include "qshap/exact.hpp"
#include "qshap/game.hpp"
#include "qshap/game_io.hpp"
#include "test_support.hpp"

namespace qshap {
namespace {

using testing::Rational;

const WeightedVotingGame kThreeVoters({3, 2, 1}, 4);

TEST(Coalition, RejectsBitsBeyondPlayerCount) {
  EXPECT_THROW(Coalition(0b1000, 3), DomainError);
  EXPECT_THROW(Coalition(0, 64), CapacityError);
  EXPECT_NO_THROW(Coalition(0b111, 3));
}

TEST(Coalition, SizeIsPopcount) {
  const Coalition c(0b1011, 4);
  EXPECT_EQ(c.size(), 3U);
  EXPECT_TRUE(c.contains(3));
  EXPECT_FALSE(c.contains(2));
  EXPECT_EQ(c.with(2).mask(), 0b1111U);
  EXPECT_EQ(c.without(0).mask(), 0b1010U);
  EXPECT_EQ(Coalition::full(63).size(), 63U);
  EXPECT_EQ(Coalition::full(0).mask(), 0U);
}

TEST(Coalition, ParsesBinaryLiteralsWithPlayerZeroRightmost) {
  EXPECT_EQ(Coalition::parse_binary("0b101", 3).mask(), 0b101U);
  EXPECT_EQ(Coalition::parse_binary("011", 3).to_player_string(), "110");
  EXPECT_THROW(Coalition::parse_binary("0b12", 3), ParseError);
  EXPECT_THROW(Coalition::parse_binary("0b1000", 3), DomainError);
}

TEST(PlayerExclusion, InjectAndRemoveAreInverse) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<unsigned>(2 + uniform_below(rng, 20));
    const auto i = static_cast<unsigned>(uniform_below(rng, n));
    const std::uint64_t reduced = rng() & ((std::uint64_t{1} << (n - 1)) - 1);
    const std::uint64_t full = inject_player(reduced, i);
    EXPECT_EQ((full >> i) & 1U, 0U);
    EXPECT_EQ(remove_player(full, i), reduced);
    EXPECT_EQ(std::popcount(full), std::popcount(reduced));
  }
}

TEST(PlayerExclusion, ExpandAddsPlayerOnPlusSide) {
  const PlayerExclusion view(3, 1);
  EXPECT_EQ(view.expand(0b11, Side::minus).mask(), 0b101U);
  EXPECT_EQ(view.expand(0b11, Side::plus).mask(), 0b111U);
  EXPECT_EQ(view.original_player(0), 0U);
  EXPECT_EQ(view.original_player(1), 2U);
}

TEST(GammaWeight, SmallCases) {
  EXPECT_NEAR(gamma_weight(2, 1), 1.0 / 6.0, 1e-16);
  EXPECT_DOUBLE_EQ(gamma_weight(2, 2), 1.0 / 3.0);
  for (unsigned n = 1; n <= 20; ++n) EXPECT_DOUBLE_EQ(gamma_weight(n, 0), 1.0 / (n + 1));
  EXPECT_THROW(gamma_weight(3, 4), DomainError);
  EXPECT_THROW(gamma_weight(64, 1), DomainError);
}

TEST(GammaWeight, MatchesExactRationalForAllSizes) {
  for (unsigned n = 0; n <= 63; ++n) {
    for (unsigned m = 0; m <= n; ++m) {
      const double want = static_cast<double>(testing::rational_gamma(n, m));
      EXPECT_NEAR(gamma_weight(n, m), want, 1e-14 * want) << n << "," << m;
    }
  }
}

TEST(GammaWeight, NormalizationOverSizes) {
  // sum_m C(n, m) gamma(n, m) = 1, checked against the rational oracle too.
  for (unsigned n : {1U, 5U, 10U, 20U}) {
    double s = 0.0;
    Rational r = 0;
    for (unsigned m = 0; m <= n; ++m) {
      s += static_cast<double>(testing::binomial(n, m)) * gamma_weight(n, m);
      r += testing::binomial(n, m) * testing::rational_gamma(n, m);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_EQ(r, Rational(1));
  }
}

TEST(GammaWeight, SumOverAllCoalitionsIsOne) {
  for (unsigned n = 0; n <= 20; ++n) {
    PairwiseSum s;
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << n); ++h) {
      s.add(gamma_weight(n, static_cast<unsigned>(std::popcount(h))));
    }
    EXPECT_NEAR(s.value(), 1.0, 1e-12) << n;
  }
}

TEST(ExactShapley, ThreeVoterExample) {
  EXPECT_NEAR(exact_shapley(kThreeVoters, 0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(exact_shapley(kThreeVoters, 1), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(exact_shapley(kThreeVoters, 2), 1.0 / 6.0, 1e-12);
  const ShapleyVector v = exact_shapley_all(kThreeVoters);
  EXPECT_NEAR(v.sum(), 1.0, 1e-12);
}

TEST(ExactShapley, NullVoterGetsExactlyZero) {
  const WeightedVotingGame g({4, 0, 3, 2}, 5);
  EXPECT_EQ(exact_shapley(g, 1), 0.0);
}

TEST(ExactShapley, UnanimityIsSplitEvenly) {
  const TableGame g(2, {0.0, 0.0, 0.0, 1.0});
  const ShapleyVector v = exact_shapley_all(g);
  EXPECT_NEAR(v[0], 0.5, 1e-15);
  EXPECT_NEAR(v[1], 0.5, 1e-15);
}

TEST(ExactShapley, CapacityAndRange) {
  EXPECT_THROW(exact_shapley(kThreeVoters, 3), DomainError);
  const WeightedVotingGame big(std::vector<std::uint64_t>(26, 1), 13);
  EXPECT_THROW(exact_shapley(big, 0), CapacityError);
}

TEST(ExactShapley, MatchesOrderingDefinitionOnEightPlayers) {
  Rng rng(2024);
  for (int trial = 0; trial < 3; ++trial) {
    const WeightedVotingGame g = testing::random_voting_game(8, rng, 9);
    const std::vector<double> want = testing::permutation_shapley(g);
    const ShapleyVector got = exact_shapley_all(g);
    for (unsigned i = 0; i < 8; ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << "player " << i;
  }
}

TEST(ExactShapley, MatchesRationalOracle) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned n = 2 + static_cast<unsigned>(uniform_below(rng, 7));
    const TableGame g = testing::random_table_game(n, rng);
    std::vector<Rational> rv(g.values().size());
    for (std::size_t m = 0; m < rv.size(); ++m) rv[m] = Rational(static_cast<int>(g.values()[m] * 4)) / 4;
    for (unsigned i = 0; i < n; ++i) {
      const double want = static_cast<double>(testing::rational_shapley(rv, n, i));
      EXPECT_NEAR(exact_shapley(g, i), want, 1e-14);
    }
  }
}

TEST(ExactShapleyProperty, Efficiency) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(uniform_below(rng, 10));
    const TableGame g = testing::random_table_game(n, rng, trial % 2 == 0);
    const ShapleyVector v = exact_shapley_all(g);
    EXPECT_NEAR(v.sum(), g.value(Coalition::full(n)), 1e-10);
  }
}

TEST(ExactShapleyProperty, SymmetricVotersGetEqualValues) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned n = 3 + static_cast<unsigned>(uniform_below(rng, 6));
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) x = uniform_below(rng, 8);
    const auto a = static_cast<unsigned>(uniform_below(rng, n));
    auto b = static_cast<unsigned>(uniform_below(rng, n - 1));
    if (b >= a) ++b;
    w[b] = w[a];
    const WeightedVotingGame g(w, 1 + uniform_below(rng, 20));
    const ShapleyVector v = exact_shapley_all(g);
    EXPECT_NEAR(v[a], v[b], 1e-14);
    // Swapping the two voters permutes the vector the same way.
    std::vector<std::uint64_t> w2 = w;
    std::swap(w2[a], w2[0]);
    const ShapleyVector v2 = exact_shapley_all(WeightedVotingGame(w2, g.quota()));
    EXPECT_NEAR(v2[0], v[a], 1e-14);
    EXPECT_NEAR(v2[a], v[0], 1e-14);
  }
}

TEST(ExactShapleyProperty, NullPlayerIsExactlyZeroInRationalArithmetic) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const unsigned n = 2 + static_cast<unsigned>(uniform_below(rng, 6));
    const auto null_player = static_cast<unsigned>(uniform_below(rng, n));
    std::vector<double> v(std::size_t{1} << n);
    std::vector<Rational> rv(v.size());
    for (std::size_t m = 1; m < v.size(); ++m) {
      const std::size_t base = m & ~(std::size_t{1} << null_player);
      if (base == m) {
        const int q = static_cast<int>(uniform_below(rng, 9));
        rv[m] = Rational(q, 8);
        v[m] = q / 8.0;
      }
    }
    for (std::size_t m = 0; m < v.size(); ++m) {
      const std::size_t base = m & ~(std::size_t{1} << null_player);
      v[m] = v[base];
      rv[m] = rv[base];
    }
    const TableGame g(n, v);
    EXPECT_EQ(testing::rational_shapley(rv, n, null_player), Rational(0));
    EXPECT_EQ(exact_shapley(g, null_player), 0.0);
  }
}

TEST(ExactShapleyProperty, Additivity) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(uniform_below(rng, 8));
    const TableGame a = testing::random_table_game(n, rng, false);
    const TableGame b = testing::random_table_game(n, rng, false);
    const TableGame ab = sum_games(a, b);
    for (unsigned i = 0; i < n; ++i) {
      EXPECT_NEAR(exact_shapley(ab, i), exact_shapley(a, i) + exact_shapley(b, i), 1e-12);
    }
  }
}

TEST(NormalizedValue, ThreeVoterTable) {
  const Coalition bob(0b010, 3);
  EXPECT_EQ(normalized_value(kThreeVoters, bob, 0, Side::plus), 1.0);
  EXPECT_EQ(normalized_value(kThreeVoters, bob, 0, Side::minus), 0.0);
  EXPECT_THROW(normalized_value(kThreeVoters, bob, 1, Side::plus), DomainError);
}

TEST(NormalizedValue, EmptyCoalitionMinusSide) {
  const TableGame g(2, {0.0, -1.0, 3.0, 1.0});
  EXPECT_DOUBLE_EQ(normalized_value(g, Coalition(0, 2), 0, Side::minus), (0.0 - -1.0) / 4.0);
}

TEST(NormalizedValue, DegenerateGameMapsToZero) {
  const TableGame zero(3, std::vector<double>(8, 0.0));
  EXPECT_TRUE(is_degenerate(zero));
  EXPECT_EQ(normalized_value(zero, Coalition(0, 3), 1, Side::plus), 0.0);
  EXPECT_EQ(exact_shapley(zero, 1), 0.0);
}

TEST(NormalizedTable, IndexedByRegisterOrder) {
  const std::vector<double> t = normalized_table(kThreeVoters, 0, Side::plus);
  // register bit 0 = Bob, bit 1 = Charley; tallies 3, 5, 4, 6
  EXPECT_EQ(t, (std::vector<double>{0.0, 1.0, 1.0, 1.0}));
}

TEST(Monotonic, Cases) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) EXPECT_TRUE(is_monotonic(testing::random_voting_game(6, rng)));
  EXPECT_FALSE(is_monotonic(TableGame(2, {0.0, 1.0, 0.0, 0.0})));
  EXPECT_TRUE(is_monotonic(TableGame(4, std::vector<double>(16, 0.0))));
  EXPECT_THROW(is_monotonic(WeightedVotingGame(std::vector<std::uint64_t>(21, 1), 3)), CapacityError);
}

TEST(CertifyBounds, DetectsViolations) {
  const TableGame ok(2, {0.0, 0.5, 0.25, 1.0}, 0.0, 1.0);
  const BoundsReport r = certify_bounds(ok);
  EXPECT_TRUE(r.bounds_hold);
  EXPECT_TRUE(r.empty_is_zero);
  const TableGame bad(2, {0.0, 0.5, 0.25, 2.0}, 0.0, 1.0);
  EXPECT_FALSE(certify_bounds(bad).bounds_hold);
  EXPECT_THROW(TableGame(1, {0.0, 1.0}, 1.0, 0.0), DomainError);
}

// Three-feature classifier: C(x) = 1 iff features 0 and 1 are both set.
ClassifierGame and_classifier() {
  return ClassifierGame::from_function(3, [](std::uint64_t x) { return (x & 0b011) == 0b011 ? 1.0 : 0.0; });
}

TEST(LocalValue, FullCoalitionIsZero) {
  const LocalExplanationGame g(and_classifier(), Coalition(0b011, 3));
  EXPECT_EQ(local_value(g, Coalition::full(3)), 0.0);
}

TEST(LocalValue, EmptyCoalitionAveragesOverAllSubsets) {
  const ClassifierGame c = and_classifier();
  const Coalition x(0b011, 3);
  const LocalExplanationGame g(c, x);
  double want = 0.0;
  for (std::uint64_t q = 0; q < 8; ++q) want += std::abs(c.value(x) - c.value(Coalition(q, 3)));
  EXPECT_DOUBLE_EQ(local_value(g, Coalition(0, 3)), want / 8.0);
  EXPECT_FALSE(certify_bounds(g).empty_is_zero);
}

TEST(LocalValue, HandEnumeratedFourTermAverage) {
  // h = {0}, x = {0, 1}: Q ranges over subsets of {1, 2}; the fixed part is {0}.
  // C({0}) = 0, C({0,1}) = 1, C({0,2}) = 0, C({0,1,2}) = 1 against C(x) = 1.
  const LocalExplanationGame g(and_classifier(), Coalition(0b011, 3));
  EXPECT_DOUBLE_EQ(local_value(g, Coalition(0b001, 3)), (1.0 + 0.0 + 1.0 + 0.0) / 4.0);
}

TEST(LocalValue, CapacityGuard) {
  const ClassifierGame big(17, std::vector<double>(std::size_t{1} << 17, 0.0));
  EXPECT_THROW(LocalExplanationGame(big, Coalition(0, 17)), CapacityError);
}

TEST(GameIo, ParsesVotingAndTableGames) {
  const AnyGame v = game_from_json(nlohmann::json::parse(R"({"kind":"weighted-voting","weights":[3,2,1],"quota":4})"));
  EXPECT_EQ(v.kind(), GameKind::weighted_voting);
  EXPECT_NEAR(exact_shapley(v, 0), 2.0 / 3.0, 1e-12);
  const AnyGame t = game_from_json(nlohmann::json::parse(R"({"kind":"table","n":3,"values":{"0b101":1.0}})"));
  EXPECT_EQ(t.value(Coalition(0b101, 3)), 1.0);
  EXPECT_EQ(t.value(Coalition(0b001, 3)), 0.0);
}

TEST(GameIo, RejectsUnknownKeys) {
  EXPECT_THROW(game_from_json(nlohmann::json::parse(R"({"kind":"weighted-voting","weights":[1],"quota":1,"x":2})")),
               ParseError);
  EXPECT_THROW(game_from_json(nlohmann::json::parse(R"({"kind":"mystery"})")), ParseError);
  EXPECT_THROW(game_from_json(nlohmann::json::parse(R"({"kind":"table","n":2,"values":{"0b2":1}})")), ParseError);
}

TEST(GameIo, RoundTripsEveryKind) {
  Rng rng(4);
  const std::vector<AnyGame> games = {
      WeightedVotingGame({5, 1, 0, 2}, 4), testing::random_table_game(4, rng), and_classifier(),
      LocalExplanationGame(and_classifier(), Coalition(0b110, 3))};
  for (const AnyGame& g : games) {
    const AnyGame back = game_from_json(nlohmann::json::parse(game_to_json(g).dump()));
    ASSERT_EQ(back.n_players(), g.n_players());
    EXPECT_EQ(back.kind(), g.kind());
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.n_players()); ++m) {
      EXPECT_EQ(back.value(Coalition(m, g.n_players())), g.value(Coalition(m, g.n_players())));
    }
  }
}

}  // namespace
}  // namespace qshap

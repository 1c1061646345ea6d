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
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qshap/coalition.hpp"
#include "qshap/errors.hpp"

namespace qshap {

enum class GameKind { table, weighted_voting, classifier, local_explanation };

inline const char* to_string(GameKind k) {
  switch (k) {
    case GameKind::table: return "table";
    case GameKind::weighted_voting: return "weighted-voting";
    case GameKind::classifier: return "classifier";
    case GameKind::local_explanation: return "local-explanation";
  }
  return "unknown";
}

/// A transferable-utility game with caller-declared value bounds.
/// `value` must be a pure function of the coalition.
template <class G>
concept CooperativeGame = requires(const G& g, const Coalition& s) {
  { g.n_players() } -> std::convertible_to<unsigned>;
  { g.value(s) } -> std::convertible_to<double>;
  { g.v_min() } -> std::convertible_to<double>;
  { g.v_max() } -> std::convertible_to<double>;
  { g.kind() } -> std::same_as<GameKind>;
};

/// Largest player count for which a full value table is materialized.
inline constexpr unsigned kMaxTablePlayers = 25;

namespace detail {

inline void check_bounds(double v_min, double v_max) {
  if (!std::isfinite(v_min) || !std::isfinite(v_max) || v_max < v_min) {
    throw DomainError("value bounds must be finite with v_min <= v_max");
  }
}

inline void check_coalition(const Coalition& s, unsigned n) {
  if (s.n_players() != n) throw DomainError("coalition built for a different player count");
}

inline std::vector<double> checked_table(unsigned n, std::vector<double> values) {
  if (n > kMaxTablePlayers) throw CapacityError("table games support at most 25 players");
  if (values.size() != (std::size_t{1} << n)) {
    throw DomainError("value table must have 2^n entries");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("value table contains a non-finite entry");
  }
  return values;
}

}  // namespace detail

/// Game given by an explicit value per coalition mask.
class TableGame {
 public:
  /// Bounds are taken as the minimum and maximum table entries.
  TableGame(unsigned n_players, std::vector<double> values)
      : n_(n_players), values_(detail::checked_table(n_players, std::move(values))) {
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    v_min_ = *lo;
    v_max_ = *hi;
  }

  TableGame(unsigned n_players, std::vector<double> values, double v_min, double v_max)
      : n_(n_players),
        values_(detail::checked_table(n_players, std::move(values))),
        v_min_(v_min),
        v_max_(v_max) {
    detail::check_bounds(v_min, v_max);
  }

  unsigned n_players() const { return n_; }
  double value(const Coalition& s) const {
    detail::check_coalition(s, n_);
    return values_[s.mask()];
  }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  GameKind kind() const { return GameKind::table; }
  const std::vector<double>& values() const { return values_; }

 private:
  unsigned n_;
  std::vector<double> values_;
  double v_min_ = 0.0;
  double v_max_ = 0.0;
};

/// V(S) = 1 when the weights in S reach the quota, else 0.
class WeightedVotingGame {
 public:
  WeightedVotingGame(std::vector<std::uint64_t> weights, std::uint64_t quota)
      : weights_(std::move(weights)), quota_(quota) {
    if (weights_.size() > Coalition::kMaxPlayers) {
      throw CapacityError("voting games support at most 63 players");
    }
    if (quota_ == 0) throw DomainError("quota must be positive");
    for (std::uint64_t w : weights_) {
      if (w > std::numeric_limits<std::uint64_t>::max() - total_) {
        throw OverflowError("total weight overflows 64 bits");
      }
      total_ += w;
    }
  }

  unsigned n_players() const { return static_cast<unsigned>(weights_.size()); }
  double value(const Coalition& s) const { return tally(s) >= quota_ ? 1.0 : 0.0; }
  double v_min() const { return 0.0; }
  double v_max() const { return 1.0; }
  GameKind kind() const { return GameKind::weighted_voting; }

  std::uint64_t tally(const Coalition& s) const {
    detail::check_coalition(s, n_players());
    std::uint64_t sum = 0;
    for (std::uint64_t m = s.mask(); m != 0; m &= m - 1) {
      sum += weights_[static_cast<unsigned>(std::countr_zero(m))];
    }
    return sum;
  }

  const std::vector<std::uint64_t>& weights() const { return weights_; }
  std::uint64_t quota() const { return quota_; }
  std::uint64_t total_weight() const { return total_; }

 private:
  std::vector<std::uint64_t> weights_;
  std::uint64_t quota_;
  std::uint64_t total_ = 0;
};

/// Binary-input classifier viewed as a game: V_C(S) = C(indicator of S).
/// Outputs are tabulated once at construction.
class ClassifierGame {
 public:
  ClassifierGame(unsigned n_features, std::vector<double> outputs, double v_min = 0.0,
                 double v_max = 1.0)
      : n_(n_features),
        outputs_(detail::checked_table(n_features, std::move(outputs))),
        v_min_(v_min),
        v_max_(v_max) {
    detail::check_bounds(v_min, v_max);
  }

  template <class F>
    requires std::invocable<const F&, std::uint64_t>
  static ClassifierGame from_function(unsigned n_features, const F& classify,
                                      double v_min = 0.0, double v_max = 1.0) {
    if (n_features > kMaxTablePlayers) throw CapacityError("classifier games support at most 25 features");
    std::vector<double> out(std::size_t{1} << n_features);
    for (std::uint64_t x = 0; x < out.size(); ++x) out[x] = static_cast<double>(classify(x));
    return ClassifierGame(n_features, std::move(out), v_min, v_max);
  }

  unsigned n_players() const { return n_; }
  double value(const Coalition& s) const {
    detail::check_coalition(s, n_);
    return outputs_[s.mask()];
  }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  GameKind kind() const { return GameKind::classifier; }

 private:
  unsigned n_;
  std::vector<double> outputs_;
  double v_min_;
  double v_max_;
};

/// Type-erased, cheaply copyable handle to any cooperative game.
class AnyGame {
 public:
  template <CooperativeGame G>
    requires(!std::same_as<std::remove_cvref_t<G>, AnyGame>)
  AnyGame(G game)  // NOLINT(google-explicit-constructor)
      : self_(std::make_shared<Model<G>>(std::move(game))) {}

  unsigned n_players() const { return self_->n_players(); }
  double value(const Coalition& s) const { return self_->value(s); }
  double v_min() const { return self_->v_min(); }
  double v_max() const { return self_->v_max(); }
  GameKind kind() const { return self_->kind(); }

  /// Underlying game if it has type G, else nullptr.
  template <class G>
  const G* target() const {
    auto* m = dynamic_cast<const Model<G>*>(self_.get());
    return m ? &m->game : nullptr;
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual unsigned n_players() const = 0;
    virtual double value(const Coalition& s) const = 0;
    virtual double v_min() const = 0;
    virtual double v_max() const = 0;
    virtual GameKind kind() const = 0;
  };

  template <class G>
  struct Model final : Concept {
    explicit Model(G g) : game(std::move(g)) {}
    unsigned n_players() const override { return game.n_players(); }
    double value(const Coalition& s) const override { return game.value(s); }
    double v_min() const override { return game.v_min(); }
    double v_max() const override { return game.v_max(); }
    GameKind kind() const override { return game.kind(); }
    G game;
  };

  std::shared_ptr<const Concept> self_;
};

/// Largest base game for which the local-explanation average is enumerated.
inline constexpr unsigned kMaxLocalPlayers = 16;

/// Local explanation of one instance x of a classifier game.
/// V(S_h) averages |V_C(S_x) - V_C((S_x ∩ S_h) ∪ Q)| over all Q ⊆ F \ S_h.
/// V(∅) is generally nonzero; see certify_bounds().
class LocalExplanationGame {
 public:
  LocalExplanationGame(AnyGame base, Coalition anchor)
      : base_(std::move(base)), anchor_(anchor) {
    if (base_.n_players() > kMaxLocalPlayers) {
      throw CapacityError("local explanations support at most 16 players");
    }
    detail::check_coalition(anchor_, base_.n_players());
    anchor_value_ = base_.value(anchor_);
  }

  unsigned n_players() const { return base_.n_players(); }
  double value(const Coalition& h) const;
  double v_min() const { return 0.0; }
  double v_max() const { return base_.v_max() - base_.v_min(); }
  GameKind kind() const { return GameKind::local_explanation; }

  const AnyGame& base() const { return base_; }
  const Coalition& anchor() const { return anchor_; }

 private:
  AnyGame base_;
  Coalition anchor_;
  double anchor_value_ = 0.0;
};

inline double LocalExplanationGame::value(const Coalition& h) const {
  const unsigned n = n_players();
  detail::check_coalition(h, n);
  const std::uint64_t fixed = anchor_.mask() & h.mask();
  const std::uint64_t free = Coalition::full(n).mask() & ~h.mask();
  // Walk every submask of `free`, including the empty one.
  double sum = 0.0;
  std::uint64_t q = 0;
  do {
    sum += std::abs(anchor_value_ - base_.value(Coalition(fixed | q, n)));
    q = (q - free) & free;
  } while (q != 0);
  return std::ldexp(sum, -static_cast<int>(std::popcount(free)));
}

/// Eq-5 style local value of coalition h.
inline double local_value(const LocalExplanationGame& game, const Coalition& h) {
  return game.value(h);
}

template <CooperativeGame G>
bool is_degenerate(const G& g) {
  return !(g.v_max() > g.v_min());
}

struct BoundsReport {
  bool empty_is_zero = true;  ///< V(∅) == 0
  bool bounds_hold = true;    ///< v_min <= V(S) <= v_max for every S
  bool degenerate = false;
  double observed_min = 0.0;
  double observed_max = 0.0;
};

/// Scans every coalition to certify the declared bounds (n <= 25).
template <CooperativeGame G>
BoundsReport certify_bounds(const G& g) {
  const unsigned n = g.n_players();
  if (n > kMaxTablePlayers) throw CapacityError("bounds scan supports at most 25 players");
  BoundsReport r;
  r.degenerate = is_degenerate(g);
  r.observed_min = std::numeric_limits<double>::infinity();
  r.observed_max = -std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const double v = g.value(Coalition(m, n));
    r.observed_min = std::min(r.observed_min, v);
    r.observed_max = std::max(r.observed_max, v);
    if (v < g.v_min() || v > g.v_max()) r.bounds_hold = false;
    if (m == 0 && v != 0.0) r.empty_is_zero = false;
  }
  return r;
}

/// Pointwise sum of two games on the same player set, as a table game.
template <CooperativeGame G, CooperativeGame H>
TableGame sum_games(const G& a, const H& b) {
  const unsigned n = a.n_players();
  if (b.n_players() != n) throw DomainError("games have different player counts");
  if (n > kMaxTablePlayers) throw CapacityError("table games support at most 25 players");
  std::vector<double> v(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < v.size(); ++m) {
    const Coalition s(m, n);
    v[m] = a.value(s) + b.value(s);
  }
  return TableGame(n, std::move(v), a.v_min() + b.v_min(), a.v_max() + b.v_max());
}

}  // namespace qshap

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

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "qshap/errors.hpp"

namespace qshap {

/// Which of the two value functions a pipeline evaluates: V(S ∪ {i}) or V(S).
enum class Side { plus, minus };

inline const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

/// A subset of players {0, ..., n_players-1} stored as a bit mask.
class Coalition {
 public:
  static constexpr unsigned kMaxPlayers = 63;

  constexpr Coalition() = default;

  Coalition(std::uint64_t mask, unsigned n_players) : mask_(mask), n_(n_players) {
    if (n_players > kMaxPlayers) {
      throw CapacityError("coalition supports at most 63 players");
    }
    if ((mask >> n_players) != 0) {
      throw DomainError("coalition mask has bits beyond the player count");
    }
  }

  static Coalition empty(unsigned n_players) { return {0, n_players}; }
  static Coalition full(unsigned n_players) {
    return {n_players == 0 ? 0 : (~std::uint64_t{0} >> (64 - n_players)), n_players};
  }

  /// Parses "0b101" or "101"; the rightmost character is player 0.
  static Coalition parse_binary(std::string_view text, unsigned n_players);

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr unsigned n_players() const { return n_; }
  constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(mask_)); }
  constexpr bool contains(unsigned j) const { return j < n_ && ((mask_ >> j) & 1U) != 0; }

  Coalition with(unsigned j) const { return {mask_ | bit(j), n_}; }
  Coalition without(unsigned j) const { return {mask_ & ~bit(j), n_}; }
  Coalition complement() const { return {full(n_).mask_ & ~mask_, n_}; }

  /// One character per player, player 0 first.
  std::string to_player_string() const {
    std::string s(n_, '0');
    for (unsigned j = 0; j < n_; ++j) {
      if (contains(j)) s[j] = '1';
    }
    return s;
  }

  friend constexpr bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::uint64_t bit(unsigned j) const {
    if (j >= n_) throw DomainError("player index out of range");
    return std::uint64_t{1} << j;
  }

  std::uint64_t mask_ = 0;
  unsigned n_ = 0;
};

inline Coalition Coalition::parse_binary(std::string_view text, unsigned n_players) {
  if (text.starts_with("0b") || text.starts_with("0B")) text.remove_prefix(2);
  if (text.empty() || text.size() > 64) throw ParseError("bad coalition literal");
  std::uint64_t mask = 0;
  for (char c : text) {
    if (c != '0' && c != '1') throw ParseError("bad coalition literal");
    mask = (mask << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return {mask, n_players};
}

/// Maps a mask over the n-1 players other than `player` to the full mask
/// with bit `player` clear. Bits below `player` stay, the rest shift up.
constexpr std::uint64_t inject_player(std::uint64_t reduced, unsigned player) {
  const std::uint64_t low = reduced & ((std::uint64_t{1} << player) - 1);
  const std::uint64_t high = (reduced >> player) << (player + 1);
  return low | high;
}

/// Inverse of inject_player; bit `player` of `full` is dropped.
constexpr std::uint64_t remove_player(std::uint64_t full, unsigned player) {
  const std::uint64_t low = full & ((std::uint64_t{1} << player) - 1);
  const std::uint64_t high = (full >> (player + 1)) << player;
  return low | high;
}

/// View of the coalitions that exclude one player, indexed by reduced masks.
class PlayerExclusion {
 public:
  PlayerExclusion(unsigned n_players, unsigned player) : n_(n_players), player_(player) {
    if (n_players == 0 || player >= n_players) throw DomainError("player index out of range");
  }

  unsigned player() const { return player_; }
  /// Number of remaining players (register width).
  unsigned others() const { return n_ - 1; }
  std::uint64_t reduced_count() const { return std::uint64_t{1} << (n_ - 1); }

  Coalition expand(std::uint64_t reduced, Side side) const {
    std::uint64_t m = inject_player(reduced, player_);
    if (side == Side::plus) m |= std::uint64_t{1} << player_;
    return {m, n_};
  }

  /// Original player index of register position r.
  unsigned original_player(unsigned r) const { return r < player_ ? r : r + 1; }

 private:
  unsigned n_;
  unsigned player_;
};

}  // namespace qshap

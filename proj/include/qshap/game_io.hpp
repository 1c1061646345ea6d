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

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qshap/coalition.hpp"
#include "qshap/errors.hpp"
#include "qshap/game.hpp"

// Game specification files.
//
//   {"kind": "weighted-voting", "weights": [3, 2, 1], "quota": 4}
//   {"kind": "table", "n": 3, "values": {"0b101": 1.0}, "v_min": 0, "v_max": 1}
//   {"kind": "classifier", "n": 3, "outputs": {"0b011": 1}}
//   {"kind": "local-explanation", "base": {...classifier...}, "anchor": "0b011"}
//
// Coalition keys are binary literals with player 0 as the rightmost digit.
// Omitted coalitions are 0. Bounds default to the table extremes (table) or
// [0, 1] (classifier). Unknown keys are rejected.

namespace qshap {

namespace detail {

inline void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError("game spec must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ParseError("unknown key in game spec: " + item.key());
  }
}

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing key in game spec: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad value for ") + key + ": " + e.what());
  }
}

inline std::vector<double> coalition_table(const nlohmann::json& obj, unsigned n) {
  if (n > kMaxTablePlayers) throw CapacityError("table games support at most 25 players");
  if (!obj.is_object()) throw ParseError("coalition values must be an object");
  std::vector<double> v(std::size_t{1} << n, 0.0);
  for (const auto& item : obj.items()) {
    if (!item.value().is_number()) throw ParseError("coalition value must be a number");
    v[Coalition::parse_binary(item.key(), n).mask()] = item.value().get<double>();
  }
  return v;
}

inline std::string coalition_key(std::uint64_t mask, unsigned n) {
  std::string s = "0b";
  if (n == 0) return s + "0";
  for (unsigned b = n; b-- > 0;) s += ((mask >> b) & 1U) ? '1' : '0';
  return s;
}

}  // namespace detail

inline AnyGame game_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("game spec needs a kind");
  const auto kind = detail::get_field<std::string>(j, "kind");
  if (kind == "weighted-voting") {
    detail::require_keys(j, {"kind", "weights", "quota"});
    return WeightedVotingGame(detail::get_field<std::vector<std::uint64_t>>(j, "weights"),
                              detail::get_field<std::uint64_t>(j, "quota"));
  }
  if (kind == "table") {
    detail::require_keys(j, {"kind", "n", "values", "v_min", "v_max"});
    const auto n = detail::get_field<unsigned>(j, "n");
    auto values = detail::coalition_table(j.at("values"), n);
    if (j.contains("v_min") != j.contains("v_max")) throw ParseError("give both v_min and v_max or neither");
    if (j.contains("v_min")) {
      return TableGame(n, std::move(values), detail::get_field<double>(j, "v_min"), detail::get_field<double>(j, "v_max"));
    }
    return TableGame(n, std::move(values));
  }
  if (kind == "classifier") {
    detail::require_keys(j, {"kind", "n", "outputs", "v_min", "v_max"});
    const auto n = detail::get_field<unsigned>(j, "n");
    const double lo = j.contains("v_min") ? detail::get_field<double>(j, "v_min") : 0.0;
    const double hi = j.contains("v_max") ? detail::get_field<double>(j, "v_max") : 1.0;
    return ClassifierGame(n, detail::coalition_table(j.at("outputs"), n), lo, hi);
  }
  if (kind == "local-explanation") {
    detail::require_keys(j, {"kind", "base", "anchor"});
    AnyGame base = game_from_json(j.at("base"));
    const auto anchor = Coalition::parse_binary(detail::get_field<std::string>(j, "anchor"), base.n_players());
    return LocalExplanationGame(std::move(base), anchor);
  }
  throw ParseError("unknown game kind: " + kind);
}

inline AnyGame load_game(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return game_from_json(j);
}

inline AnyGame load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file: " + path);
  return load_game(in);
}

inline nlohmann::json game_to_json(const AnyGame& game) {
  const unsigned n = game.n_players();
  if (const auto* v = game.target<WeightedVotingGame>()) {
    return {{"kind", "weighted-voting"}, {"weights", v->weights()}, {"quota", v->quota()}};
  }
  if (const auto* le = game.target<LocalExplanationGame>()) {
    return {{"kind", "local-explanation"},
            {"base", game_to_json(le->base())},
            {"anchor", detail::coalition_key(le->anchor().mask(), n)}};
  }
  if (n > kMaxTablePlayers) throw CapacityError("table export supports at most 25 players");
  nlohmann::json values = nlohmann::json::object();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const double x = game.value(Coalition(m, n));
    if (x != 0.0) values[detail::coalition_key(m, n)] = x;
  }
  const bool classifier = game.kind() == GameKind::classifier;
  return {{"kind", classifier ? "classifier" : "table"},
          {"n", n},
          {classifier ? "outputs" : "values", values},
          {"v_min", game.v_min()},
          {"v_max", game.v_max()}};
}

}  // namespace qshap

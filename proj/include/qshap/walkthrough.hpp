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
#include <cstdio>
#include <string>
#include <vector>

#include "qshap/error_bounds.hpp"
#include "qshap/exact.hpp"
#include "qshap/game.hpp"
#include "qshap/qsim/primitives.hpp"
#include "qshap/qsim/state_vector.hpp"
#include "qshap/qshapley.hpp"
#include "qshap/weights.hpp"

// Three-voter example (weights 3, 2, 1, quota 4), player 0, ell = 2, traced
// through the voting circuit stage by stage and checked against the closed
// form of each intermediate state:
//
//   sum_k sqrt(w_2(k)) |k> [ (1-t')|00> + sqrt(t'(1-t'))(|01> + |10>) + t'|11> ]
//
// over the two remaining voters, with Aux holding the running tally and Ut
// the comparator result.

namespace qshap {

struct WalkthroughStage {
  std::string label;
  Side side = Side::minus;
  std::string ket;            ///< rendered nonzero components
  double max_deviation = 0.0; ///< largest amplitude mismatch against the closed form
  double ut_expectation = 0.0;
  bool matches = false;
};

struct AliceTrace {
  std::vector<WalkthroughStage> stages;
  double plus_expectation = 0.0;
  double minus_expectation = 0.0;
  double estimate = 0.0;
  double exact = 0.0;
  double bound = 0.0;
  bool all_checks_pass = false;

  std::string render() const;
};

namespace detail {

/// Closed-form amplitude of a basis component after `stage`:
/// 0 = Step 1, 1 = tally, 2 = comparator, 3 = uncompute.
inline double walkthrough_expected(const qsim::StateVector& s, std::uint64_t idx, Side side, int stage,
                                   const WeightedVotingGame& game) {
  const qsim::RegisterLayout& L = s.layout();
  const unsigned ell = L.pt().count;
  const std::uint64_t k = L.pt().extract(idx);
  const std::uint64_t h = L.pl().extract(idx);
  const std::uint64_t aux = L.aux().extract(idx);
  const std::uint64_t ut = L.ut_range().extract(idx);
  const double tp = t_prime(ell, k);
  const unsigned ones = static_cast<unsigned>(std::popcount(h));
  const double player_part = std::sqrt(std::pow(tp, ones) * std::pow(1.0 - tp, 2 - ones));
  const double amp = std::sqrt(w_ell(ell, k)) * player_part;
  // Register bit r of h is original player r + 1.
  std::uint64_t tally = side == Side::plus ? game.weights()[0] : 0;
  for (unsigned r = 0; r < 2; ++r) {
    if ((h >> r) & 1U) tally += game.weights()[r + 1];
  }
  const std::uint64_t want_aux = (stage == 1 || stage == 2) ? tally : 0;
  const std::uint64_t want_ut = stage >= 2 && tally >= game.quota() ? 1 : 0;
  return (aux == want_aux && ut == want_ut) ? amp : 0.0;
}

inline std::string bits(std::uint64_t v, unsigned width) {
  std::string s;
  for (unsigned b = width; b-- > 0;) s += ((v >> b) & 1U) ? '1' : '0';
  return s;
}

/// Components with |amp| > 1e-12, Pl written for all three voters with
/// voter 0 leftmost (its bit is the side).
inline std::string render_state(const qsim::StateVector& s, Side side) {
  const qsim::RegisterLayout& L = s.layout();
  std::string out;
  char buf[160];
  const auto amps = s.amplitudes();
  for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
    if (std::abs(amps[idx]) <= 1e-12) continue;
    const std::uint64_t h = L.pl().extract(idx);
    std::string pl;
    pl += side == Side::plus ? '1' : '0';
    pl += (h & 1U) ? '1' : '0';
    pl += (h & 2U) ? '1' : '0';
    std::snprintf(buf, sizeof buf, "  %+.6f |%s>_Pt |%s>_Pl |%s>_Aux |%s>_Ut\n", amps[idx].real(),
                  bits(L.pt().extract(idx), L.pt().count).c_str(), pl.c_str(),
                  bits(L.aux().extract(idx), L.aux().count).c_str(), bits(L.ut_range().extract(idx), 1).c_str());
    out += buf;
  }
  return out;
}

}  // namespace detail

/// Runs the three-voter trace for both sides and checks every stage.
inline AliceTrace run_alice_walkthrough() {
  const WeightedVotingGame game({3, 2, 1}, 4);
  constexpr unsigned kEll = 2;
  const PartitionScheme scheme = PartitionScheme::sin2(kEll);
  AliceTrace trace;
  bool ok = true;

  for (Side side : {Side::minus, Side::plus}) {
    const qsim::VotingCircuitOracle oracle = qsim::voting_value_circuit(game, 0, side);
    const qsim::RegisterLayout layout(kEll, 2, oracle.aux_qubits());
    qsim::StateVector state(layout);
    qsim::prepare_d_ell(state, scheme);
    for (unsigned j = 0; j < 2; ++j) qsim::apply_r_j(state, j, scheme);

    const qsim::Circuit tally = oracle.tally_circuit(layout, layout.pl());
    const char* labels[] = {"after step 1", "after tally", "after comparator", "after uncompute"};
    for (int stage = 0; stage < 4; ++stage) {
      if (stage == 1) tally.apply(state);
      if (stage == 2) oracle.comparator_circuit(layout).apply(state);
      if (stage == 3) tally.apply_inverse(state);
      WalkthroughStage st;
      st.label = labels[stage];
      st.side = side;
      st.ket = detail::render_state(state, side);
      for (std::uint64_t idx = 0; idx < state.size(); ++idx) {
        const double want = detail::walkthrough_expected(state, idx, side, stage, game);
        st.max_deviation = std::max(st.max_deviation, std::abs(state[idx] - qsim::Amplitude(want)));
      }
      st.ut_expectation = qsim::utility_expectation(state);
      st.matches = st.max_deviation < 1e-12;
      ok = ok && st.matches;
      trace.stages.push_back(st);
    }
    (side == Side::plus ? trace.plus_expectation : trace.minus_expectation) = qsim::utility_expectation(state);
  }
  trace.estimate = trace.plus_expectation - trace.minus_expectation;
  trace.exact = exact_shapley(game, 0);
  trace.bound = step1_error_bound(2, kEll, 1.0, 0.0);
  ok = ok && trace.minus_expectation == 0.0 && std::abs(trace.plus_expectation - 0.6617) <= 5e-4;
  ok = ok && std::abs(trace.estimate - trace.exact) <= trace.bound;
  trace.all_checks_pass = ok;
  return trace;
}

inline std::string AliceTrace::render() const {
  std::string out = "voting game w=(3,2,1) q=4, player 0, ell=2, voting-circuit oracle\n";
  char buf[200];
  for (const WalkthroughStage& s : stages) {
    std::snprintf(buf, sizeof buf, "\n[%s] %s  (Ut=1 probability %.6f, max deviation %.2e, %s)\n", to_string(s.side),
                  s.label.c_str(), s.ut_expectation, s.max_deviation, s.matches ? "ok" : "MISMATCH");
    out += buf;
    out += s.ket;
  }
  std::snprintf(buf, sizeof buf,
                "\nminus expectation %.6f\nplus expectation  %.6f\nestimate          %.6f\nexact             %.6f\n"
                "step-1 bound      %.6f\nchecks            %s\n",
                minus_expectation, plus_expectation, estimate, exact, bound, all_checks_pass ? "pass" : "FAIL");
  out += buf;
  return out;
}

}  // namespace qshap

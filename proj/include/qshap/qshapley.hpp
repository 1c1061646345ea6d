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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qshap/coalition.hpp"
#include "qshap/error_bounds.hpp"
#include "qshap/errors.hpp"
#include "qshap/exact.hpp"
#include "qshap/game.hpp"
#include "qshap/mc.hpp"
#include "qshap/qsim/amplitude_estimation.hpp"
#include "qshap/qsim/circuit.hpp"
#include "qshap/qsim/primitives.hpp"
#include "qshap/qsim/state_vector.hpp"
#include "qshap/rng.hpp"
#include "qshap/weights.hpp"

namespace qshap {

enum class Method { naive, efficient, improved };
enum class Extraction { ideal, qae };
enum class OracleKind { direct, voting_circuit };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::naive: return "naive";
    case Method::efficient: return "efficient";
    case Method::improved: return "improved";
  }
  return "unknown";
}

inline const char* to_string(Extraction e) { return e == Extraction::ideal ? "ideal" : "qae"; }

struct EstimatorConfig {
  Method method = Method::efficient;
  std::optional<unsigned> ell;        ///< partition qubits; chosen from epsilon when unset
  std::optional<std::uint64_t> t;     ///< Grover iterations (power of two); chosen from epsilon when unset
  std::optional<double> epsilon;      ///< target error for automatic ell and t
  Extraction extraction = Extraction::ideal;
  std::uint64_t seed = 0;
  unsigned repeats_for_median = 5;
  OracleKind oracle = OracleKind::direct;
  std::optional<double> phi_hint;     ///< lower-bound guess of the Shapley value for choosing t
  std::vector<double> perturbation;   ///< per-subinterval sample offsets (improved method)
};

struct ShapleyEstimate {
  unsigned player = 0;
  double value = 0.0;
  double step1_bound = 0.0;
  double qae_bound = 0.0;
  double total_bound = 0.0;
  double plus_expectation = 0.0;
  double minus_expectation = 0.0;
  Method method = Method::efficient;
  Extraction extraction = Extraction::ideal;
  unsigned ell = 0;
  std::uint64_t t = 0;
  unsigned qubits = 0;
  std::uint64_t oracle_queries = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;
};

/// State-preparation circuit together with the register map it acts on.
struct Pipeline {
  qsim::RegisterLayout layout;
  qsim::Circuit circuit;
};

/// Value oracle for player i. The voting circuit needs a weighted voting
/// game, possibly held by an AnyGame.
template <CooperativeGame G>
qsim::ValueOracle build_oracle(const G& game, unsigned i, Side side, OracleKind kind) {
  if (kind == OracleKind::direct) return qsim::make_direct_oracle(game, i, side);
  const WeightedVotingGame* voting = nullptr;
  if constexpr (std::same_as<G, WeightedVotingGame>) {
    voting = &game;
  } else if constexpr (std::same_as<G, AnyGame>) {
    voting = game.template target<WeightedVotingGame>();
  }
  if (voting == nullptr) throw DomainError("voting circuit oracle needs a weighted voting game");
  return qsim::voting_value_circuit(*voting, i, side);
}

/// Step 1 and Step 2: D_ell on Pt, R_j on every player qubit, then U_V.
inline Pipeline efficient_pipeline(const qsim::ValueOracle& oracle, const PartitionScheme& scheme) {
  const unsigned n = qsim::oracle_input_qubits(oracle);
  qsim::RegisterLayout layout(scheme.ell(), n, qsim::oracle_aux_qubits(oracle));
  qsim::Circuit c = qsim::d_ell_circuit(layout, scheme);
  for (unsigned j = 0; j < n; ++j) c.append(qsim::r_j_circuit(layout, j, scheme));
  c.append(qsim::oracle_circuit(oracle, layout, layout.pl()));
  return {layout, std::move(c)};
}

template <CooperativeGame G>
Pipeline efficient_pipeline(const G& game, unsigned i, Side side, const PartitionScheme& scheme,
                            OracleKind kind = OracleKind::direct) {
  return efficient_pipeline(build_oracle(game, i, side, kind), scheme);
}

inline qsim::StateVector run_pipeline(const Pipeline& p) {
  qsim::StateVector s(p.layout);
  p.circuit.apply(s);
  return s;
}

/// The Step-2 state for player i on one side.
template <CooperativeGame G>
qsim::StateVector efficient_state_prep(const G& game, unsigned i, Side side, const PartitionScheme& scheme,
                                       OracleKind kind = OracleKind::direct) {
  return run_pipeline(efficient_pipeline(game, i, side, scheme, kind));
}

/// Uniform-partition variant with optional sample perturbations.
template <CooperativeGame G>
qsim::StateVector improved_state_prep(const G& game, unsigned i, Side side, unsigned ell,
                                      std::vector<double> perturbation = {}) {
  return efficient_state_prep(game, i, side, PartitionScheme::uniform(ell, std::move(perturbation)));
}

/// Hadamards on Pl followed by the block-diagonal B+-.
template <CooperativeGame G>
Pipeline naive_pipeline(const G& game, unsigned i, Side side) {
  if (i >= game.n_players()) throw DomainError("player index out of range");
  const unsigned n = game.n_players() - 1;
  if (n > qsim::kMaxNaivePlayers) throw CapacityError("block-diagonal construction supports at most 14 players");
  qsim::RegisterLayout layout(0, n);
  qsim::Circuit c(layout.total_qubits());
  for (unsigned j = 0; j < n; ++j) c.single(layout.pl().qubit(j), qsim::hadamard());
  c.append(qsim::b_pm_circuit(layout, game, i, side));
  return {layout, std::move(c)};
}

/// Shapley value from the block-diagonal construction; no partition error.
template <CooperativeGame G>
double naive_estimate(const G& game, unsigned i) {
  if (i >= game.n_players()) throw DomainError("player index out of range");
  const unsigned n = game.n_players() - 1;
  if (n > 12) throw CapacityError("naive estimate supports at most 13 players");
  if (is_degenerate(game)) return 0.0;
  const double plus = qsim::utility_expectation(run_pipeline(naive_pipeline(game, i, Side::plus)));
  const double minus = qsim::utility_expectation(run_pipeline(naive_pipeline(game, i, Side::minus)));
  return std::ldexp(plus - minus, static_cast<int>(n)) * (game.v_max() - game.v_min());
}

/// Circuit on Pl and Pl' that, for each reduced coalition h in Pl, loads Pl'
/// with the anchor bits of S_h and uniform noise elsewhere: X on the anchor
/// bits of Pl', X on each Pl qubit, then a Pl-controlled Hadamard onto the
/// matching Pl' qubit. Player i's Pl' qubit keeps its anchor bit on the plus
/// side and is randomized on the minus side.
inline qsim::Circuit local_explanation_prep_circuit(const qsim::RegisterLayout& layout, const Coalition& anchor,
                                                    unsigned i, Side side) {
  const unsigned n_players = anchor.n_players();
  if (layout.pl_prime().count != n_players || layout.pl().count + 1 != n_players) {
    throw DomainError("layout needs N-1 player qubits and N copy qubits");
  }
  const PlayerExclusion view(n_players, i);
  qsim::Circuit c(layout.total_qubits());
  for (unsigned j = 0; j < n_players; ++j) {
    if (anchor.contains(j)) c.single(layout.pl_prime().qubit(j), qsim::pauli_x());
  }
  for (unsigned r = 0; r < layout.pl().count; ++r) c.single(layout.pl().qubit(r), qsim::pauli_x());
  for (unsigned r = 0; r < layout.pl().count; ++r) {
    c.controlled(layout.pl().qubit(r), layout.pl_prime().qubit(view.original_player(r)), qsim::hadamard());
  }
  if (side == Side::minus) c.single(layout.pl_prime().qubit(i), qsim::hadamard());
  return c;
}

/// Applies the local-explanation preparation; Pl' must be zeroed.
inline void local_explanation_prep(qsim::StateVector& state, const Coalition& anchor, unsigned i, Side side) {
  if (!state.register_is_zero(state.layout().pl_prime())) throw StateError("copy register is not zeroed");
  local_explanation_prep_circuit(state.layout(), anchor, i, side).apply(state);
}

/// Oracle on Pl' returning |V_C(S_x) - V_C(q)| / range for every q.
inline qsim::DirectOracle local_difference_oracle(const LocalExplanationGame& game) {
  const AnyGame& base = game.base();
  const unsigned n = base.n_players();
  const double range = base.v_max() - base.v_min();
  const double anchor_value = base.value(game.anchor());
  std::vector<double> v(std::size_t{1} << n);
  for (std::uint64_t q = 0; q < v.size(); ++q) {
    v[q] = range > 0.0 ? std::abs(anchor_value - base.value(Coalition(q, n))) / range : 0.0;
  }
  return {std::move(v)};
}

/// Full local-explanation pipeline: Step 1 on Pl, the copy onto Pl', and
/// the difference oracle reading Pl'.
inline Pipeline local_explanation_pipeline(const LocalExplanationGame& game, unsigned i, Side side,
                                           const PartitionScheme& scheme) {
  const unsigned n_players = game.n_players();
  if (i >= n_players) throw DomainError("player index out of range");
  qsim::RegisterLayout layout(scheme.ell(), n_players - 1, 0, n_players);
  qsim::Circuit c = qsim::d_ell_circuit(layout, scheme);
  for (unsigned j = 0; j + 1 < n_players; ++j) c.append(qsim::r_j_circuit(layout, j, scheme));
  c.append(local_explanation_prep_circuit(layout, game.anchor(), i, side));
  c.append(local_difference_oracle(game).circuit(layout, layout.pl_prime()));
  return {layout, std::move(c)};
}

namespace detail {

inline ShapleyEstimate degenerate_estimate(unsigned i, const EstimatorConfig& config) {
  ShapleyEstimate e;
  e.player = i;
  e.method = config.method;
  e.extraction = config.extraction;
  e.seed = config.seed;
  e.degenerate = true;
  return e;
}

inline unsigned resolve_ell(const EstimatorConfig& config, unsigned n, double v_max, double v_min) {
  if (config.ell) return *config.ell;
  if (!config.epsilon) throw DomainError("set ell or epsilon");
  return std::min(choose_ell(n, *config.epsilon, v_max, v_min), kMaxEll);
}

inline PartitionScheme resolve_scheme(const EstimatorConfig& config, unsigned ell) {
  if (config.method == Method::improved) return PartitionScheme::uniform(ell, config.perturbation);
  return PartitionScheme::sin2(ell);
}

/// Expectations of the two side pipelines, by exact readout or by
/// median-of-repeats amplitude estimation.
inline void extract(const Pipeline& plus, const Pipeline& minus, unsigned player, const EstimatorConfig& config,
                    std::uint64_t t, ShapleyEstimate& out) {
  if (config.extraction == Extraction::ideal) {
    out.plus_expectation = qsim::utility_expectation(run_pipeline(plus));
    out.minus_expectation = qsim::utility_expectation(run_pipeline(minus));
    out.oracle_queries = 2;
    return;
  }
  const auto side_seed = [&](Side s) { return mix_seed(config.seed, player, s == Side::plus ? 1 : 2); };
  const qsim::AmplitudeEstimator ae_plus(plus.circuit, plus.layout.ut(), t);
  const qsim::AmplitudeEstimator ae_minus(minus.circuit, minus.layout.ut(), t);
  out.plus_expectation = ae_plus.median_estimate(side_seed(Side::plus), config.repeats_for_median);
  out.minus_expectation = ae_minus.median_estimate(side_seed(Side::minus), config.repeats_for_median);
  out.oracle_queries = 2 * config.repeats_for_median * 2 * t;
}

template <CooperativeGame G>
std::uint64_t resolve_t(const G& game, unsigned i, const EstimatorConfig& config) {
  if (config.t) {
    if (*config.t == 0 || !std::has_single_bit(*config.t)) throw DomainError("t must be a power of two");
    return *config.t;
  }
  if (!config.epsilon) throw DomainError("set t or epsilon");
  double hint = 0.0;
  if (config.phi_hint) {
    hint = *config.phi_hint;
  } else {
    hint = mc_shapley(game, i, McConfig{100, mix_seed(config.seed, i, 3), McStrategy::permutation}).estimate;
  }
  const double eps = *config.epsilon;
  hint = std::max(hint, game.v_min() + eps);
  return next_power_of_two(choose_t(hint, eps, game.v_max(), game.v_min()));
}

}  // namespace detail

/// Estimates player i's Shapley value as (E+ - E-) (v_max - v_min) and
/// attaches the step-1 and amplitude-estimation bounds.
template <CooperativeGame G>
ShapleyEstimate estimate_shapley(const G& game, unsigned i, const EstimatorConfig& config) {
  const unsigned n_players = game.n_players();
  if (i >= n_players) throw DomainError("player index out of range");
  if (is_degenerate(game)) return detail::degenerate_estimate(i, config);
  const unsigned n = n_players - 1;
  const double range = game.v_max() - game.v_min();

  ShapleyEstimate out;
  out.player = i;
  out.method = config.method;
  out.extraction = config.extraction;
  out.seed = config.seed;
  const std::uint64_t t = config.extraction == Extraction::qae ? detail::resolve_t(game, i, config) : 0;
  out.t = t;

  double scale = range;
  if (config.method == Method::naive) {
    const Pipeline plus = naive_pipeline(game, i, Side::plus);
    const Pipeline minus = naive_pipeline(game, i, Side::minus);
    out.qubits = plus.layout.total_qubits();
    detail::extract(plus, minus, i, config, t, out);
    scale = std::ldexp(range, static_cast<int>(n));
  } else {
    out.ell = detail::resolve_ell(config, n, game.v_max(), game.v_min());
    const PartitionScheme scheme = detail::resolve_scheme(config, out.ell);
    const Pipeline plus = efficient_pipeline(game, i, Side::plus, scheme, config.oracle);
    const Pipeline minus = efficient_pipeline(game, i, Side::minus, scheme, config.oracle);
    out.qubits = plus.layout.total_qubits();
    detail::extract(plus, minus, i, config, t, out);
    out.step1_bound = step1_bound_any(n, game.v_max(), game.v_min(), scheme);
  }
  out.value = (out.plus_expectation - out.minus_expectation) * scale;
  if (config.extraction == Extraction::qae) out.qae_bound = scale * 2.0 * qae_error_bound_worst(t);
  out.total_bound = out.step1_bound + out.qae_bound;
  return out;
}

template <CooperativeGame G>
std::vector<ShapleyEstimate> estimate_shapley_all(const G& game, const EstimatorConfig& config) {
  std::vector<ShapleyEstimate> out;
  out.reserve(game.n_players());
  for (unsigned i = 0; i < game.n_players(); ++i) out.push_back(estimate_shapley(game, i, config));
  return out;
}

/// Shapley estimate for a local-explanation game through the Pl' pipeline.
inline ShapleyEstimate estimate_local_explanation(const LocalExplanationGame& game, unsigned i,
                                                  const EstimatorConfig& config) {
  if (config.method == Method::naive) throw DomainError("local explanations use the partition pipelines");
  if (i >= game.n_players()) throw DomainError("player index out of range");
  if (is_degenerate(game)) return detail::degenerate_estimate(i, config);
  const unsigned n = game.n_players() - 1;
  const double range = game.v_max() - game.v_min();
  ShapleyEstimate out;
  out.player = i;
  out.method = config.method;
  out.extraction = config.extraction;
  out.seed = config.seed;
  out.ell = detail::resolve_ell(config, n, game.v_max(), game.v_min());
  const PartitionScheme scheme = detail::resolve_scheme(config, out.ell);
  out.t = config.extraction == Extraction::qae ? detail::resolve_t(game, i, config) : 0;
  const Pipeline plus = local_explanation_pipeline(game, i, Side::plus, scheme);
  const Pipeline minus = local_explanation_pipeline(game, i, Side::minus, scheme);
  out.qubits = plus.layout.total_qubits();
  detail::extract(plus, minus, i, config, out.t, out);
  out.value = (out.plus_expectation - out.minus_expectation) * range;
  out.step1_bound = step1_bound_any(n, game.v_max(), game.v_min(), scheme);
  if (config.extraction == Extraction::qae) out.qae_bound = range * 2.0 * qae_error_bound_worst(out.t);
  out.total_bound = out.step1_bound + out.qae_bound;
  return out;
}

/// Ideal-extraction estimate from explicit side oracles, for studying
/// imperfect value oracles.
inline double estimate_with_oracles(const qsim::ValueOracle& plus, const qsim::ValueOracle& minus,
                                    const PartitionScheme& scheme, double v_max, double v_min) {
  const double e_plus = qsim::utility_expectation(run_pipeline(efficient_pipeline(plus, scheme)));
  const double e_minus = qsim::utility_expectation(run_pipeline(efficient_pipeline(minus, scheme)));
  return (e_plus - e_minus) * (v_max - v_min);
}

}  // namespace qshap

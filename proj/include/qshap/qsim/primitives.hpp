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
#include <cmath>
#include <cstdint>
#include <numbers>
#include <variant>
#include <vector>

#include "qshap/errors.hpp"
#include "qshap/exact.hpp"
#include "qshap/game.hpp"
#include "qshap/qsim/circuit.hpp"
#include "qshap/qsim/state_vector.hpp"
#include "qshap/weights.hpp"

namespace qshap::qsim {

namespace detail {

/// t_ell(b) - t_ell(a) for the sin^2 partition, as sin(beta - alpha) sin(beta + alpha).
inline double sin2_block_mass(unsigned ell, std::uint64_t a, std::uint64_t b) {
  const double unit = std::ldexp(std::numbers::pi, -static_cast<int>(ell) - 1);
  const double alpha = unit * static_cast<double>(a);
  const double beta = unit * static_cast<double>(b);
  return std::sin(beta - alpha) * std::sin(beta + alpha);
}

}  // namespace detail

/// Circuit preparing sum_k sqrt(width(k)) |k> on the Pt register from |0>.
/// The sin^2 partition uses a binary rotation tree: level j rotates qubit
/// ell-1-j conditioned on the j more significant bits. The uniform
/// partition is a Hadamard on every Pt qubit.
inline Circuit d_ell_circuit(const RegisterLayout& layout, const PartitionScheme& scheme) {
  const unsigned ell = scheme.ell();
  if (layout.pt().count != ell) throw DomainError("Pt width differs from the partition size");
  Circuit c(layout.total_qubits());
  const QubitRange pt = layout.pt();
  if (scheme.kind() == PartitionKind::uniform) {
    for (unsigned q = 0; q < ell; ++q) c.single(pt.qubit(q), hadamard());
    return c;
  }
  for (unsigned j = 0; j < ell; ++j) {
    const unsigned target = ell - 1 - j;
    const unsigned span_bits = ell - j;  // subtree below a j-bit prefix
    MultiplexedGate g{pt.qubit(target), {pt.qubit(target + 1), j}, {}};
    g.matrices.reserve(std::size_t{1} << j);
    for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << j); ++prefix) {
      const std::uint64_t lo = prefix << span_bits;
      const std::uint64_t mid = lo + (std::uint64_t{1} << (span_bits - 1));
      const std::uint64_t hi = (prefix + 1) << span_bits;
      const double p0 = detail::sin2_block_mass(ell, lo, mid);
      const double p1 = detail::sin2_block_mass(ell, mid, hi);
      g.matrices.push_back(ry(2.0 * std::atan2(std::sqrt(p1), std::sqrt(p0))));
    }
    c.add(std::move(g));
  }
  return c;
}

/// Loads the partition register. Throws StateError unless Pt is |0...0>.
inline void prepare_d_ell(StateVector& state, const PartitionScheme& scheme) {
  if (!state.register_is_zero(state.layout().pt())) throw StateError("partition register is not zeroed");
  d_ell_circuit(state.layout(), scheme).apply(state);
}

/// How the sample-point rotation is laid out as gates.
enum class RotationStyle {
  multiplexed,  ///< one Pt-multiplexed Ry per player qubit
  bitwise,      ///< fixed Ry plus one Pt-bit-controlled Ry per partition qubit
};

/// Rotation of player qubit j by the sample point of the Pt subinterval:
/// |k>|0> -> |k>(sqrt(1 - s(k))|0> + sqrt(s(k))|1>).
/// For sin^2 points the angle (2k+1) pi / 2^(ell+1) is linear in k, which
/// allows the bitwise layout; uniform points always use the multiplexor.
inline Circuit r_j_circuit(const RegisterLayout& layout, unsigned j, const PartitionScheme& scheme,
                           QubitRange players, RotationStyle style = RotationStyle::multiplexed) {
  const unsigned ell = scheme.ell();
  if (layout.pt().count != ell) throw DomainError("Pt width differs from the partition size");
  if (j >= players.count) throw DomainError("player qubit out of range");
  const unsigned target = players.qubit(j);
  Circuit c(layout.total_qubits());
  if (scheme.kind() == PartitionKind::sin2 && style == RotationStyle::bitwise) {
    c.single(target, ry(std::ldexp(std::numbers::pi, -static_cast<int>(ell) - 1)));
    for (unsigned b = 0; b < ell; ++b) {
      c.controlled(layout.pt().qubit(b), target,
                   ry(std::ldexp(std::numbers::pi, static_cast<int>(b) - static_cast<int>(ell))));
    }
    return c;
  }
  MultiplexedGate g{target, layout.pt(), {}};
  g.matrices.reserve(scheme.intervals());
  for (std::uint64_t k = 0; k < scheme.intervals(); ++k) {
    if (scheme.kind() == PartitionKind::sin2) {
      g.matrices.push_back(ry(std::ldexp(std::numbers::pi * (2.0 * static_cast<double>(k) + 1.0), -static_cast<int>(ell) - 1)));
    } else {
      g.matrices.push_back(ry(ry_angle_for_probability(scheme.sample(k))));
    }
  }
  c.add(std::move(g));
  return c;
}

inline Circuit r_j_circuit(const RegisterLayout& layout, unsigned j, const PartitionScheme& scheme,
                           RotationStyle style = RotationStyle::multiplexed) {
  return r_j_circuit(layout, j, scheme, layout.pl(), style);
}

inline void apply_r_j(StateVector& state, unsigned j, const PartitionScheme& scheme,
                      RotationStyle style = RotationStyle::multiplexed) {
  r_j_circuit(state.layout(), j, scheme, style).apply(state);
}

/// Value oracle given by a table of normalized values, one per register
/// value: |h>|0> -> |h>(sqrt(1 - v(h))|0> + sqrt(v(h))|1>).
struct DirectOracle {
  std::vector<double> values;

  unsigned input_qubits() const { return static_cast<unsigned>(std::countr_zero(values.size())); }
  unsigned aux_qubits() const { return 0; }

  Circuit circuit(const RegisterLayout& layout, QubitRange input) const {
    if (values.size() != (std::size_t{1} << input.count)) throw DomainError("oracle table does not match input width");
    MultiplexedGate g{layout.ut(), input, {}};
    g.matrices.reserve(values.size());
    for (double v : values) {
      if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) throw ContractError("oracle value outside [0, 1]");
      g.matrices.push_back(ry(ry_angle_for_probability(std::clamp(v, 0.0, 1.0))));
    }
    Circuit c(layout.total_qubits());
    c.add(std::move(g));
    return c;
  }
};

/// Normalized-value table oracle for player i on one side.
template <CooperativeGame G>
DirectOracle make_direct_oracle(const G& game, unsigned i, Side side) {
  if (game.n_players() - 1 > kMaxQubits) throw CapacityError("too many players for the simulator");
  return DirectOracle{normalized_table(game, i, side)};
}

/// Reversible voting circuit: controlled adds of each register player's
/// weight into Aux, an unconditional add of w_i on the plus side, a
/// [tally >= quota] comparator into Ut, then the adds undone.
class VotingCircuitOracle {
 public:
  VotingCircuitOracle(std::vector<std::uint64_t> register_weights, std::uint64_t player_weight,
                      std::uint64_t quota, Side side, unsigned aux_width)
      : weights_(std::move(register_weights)), player_weight_(player_weight), quota_(quota), side_(side),
        aux_width_(aux_width) {
    std::uint64_t total = player_weight_;
    for (std::uint64_t w : weights_) total += w;
    if (aux_width_ > 62 || total > (std::uint64_t{1} << aux_width_) - 1) {
      throw OverflowError("Aux register too narrow for the total weight");
    }
  }

  /// ceil(log2(total + 1)).
  static unsigned required_aux_width(std::uint64_t total_weight) {
    return static_cast<unsigned>(std::bit_width(total_weight));
  }

  unsigned input_qubits() const { return static_cast<unsigned>(weights_.size()); }
  unsigned aux_qubits() const { return aux_width_; }
  Side side() const { return side_; }
  std::uint64_t quota() const { return quota_; }

  /// First half: accumulate the tally into Aux.
  Circuit tally_circuit(const RegisterLayout& layout, QubitRange input) const {
    check_layout(layout, input);
    Circuit c(layout.total_qubits());
    const QubitRange aux = layout.aux();
    const std::uint64_t modulus_mask = aux.count == 0 ? 0 : (std::uint64_t{1} << aux.count) - 1;
    const auto adder = [aux, modulus_mask](std::uint64_t control_bit, std::uint64_t w, std::string name) {
      const auto add = [=](std::uint64_t idx, bool subtract) {
        if (control_bit != 0 && (idx & control_bit) == 0) return idx;
        const std::uint64_t v = aux.extract(idx);
        const std::uint64_t nv = (subtract ? v - w : v + w) & modulus_mask;
        return (idx & ~aux.mask()) | aux.place(nv);
      };
      return PermutationGate{std::move(name), [add](std::uint64_t i) { return add(i, false); },
                             [add](std::uint64_t i) { return add(i, true); }};
    };
    for (unsigned j = 0; j < weights_.size(); ++j) {
      if (weights_[j] == 0) continue;
      c.add(adder(std::uint64_t{1} << input.qubit(j), weights_[j], "add_w" + std::to_string(j)));
    }
    if (side_ == Side::plus && player_weight_ != 0) c.add(adder(0, player_weight_, "add_wi"));
    return c;
  }

  /// Flips Ut when the Aux tally reaches the quota.
  Circuit comparator_circuit(const RegisterLayout& layout) const {
    Circuit c(layout.total_qubits());
    const QubitRange aux = layout.aux();
    const std::uint64_t ut_bit = std::uint64_t{1} << layout.ut();
    const std::uint64_t q = quota_;
    const auto cmp = [aux, ut_bit, q](std::uint64_t idx) { return aux.extract(idx) >= q ? idx ^ ut_bit : idx; };
    c.add(PermutationGate{"geq_q", cmp, cmp});
    return c;
  }

  Circuit circuit(const RegisterLayout& layout, QubitRange input) const {
    const Circuit tally = tally_circuit(layout, input);
    Circuit c(layout.total_qubits());
    c.append(tally).append(comparator_circuit(layout)).append(tally.inverse());
    return c;
  }

 private:
  void check_layout(const RegisterLayout& layout, QubitRange input) const {
    if (input.count != weights_.size()) throw DomainError("input width differs from the player count");
    if (layout.aux().count != aux_width_) throw DomainError("layout Aux width differs from the oracle");
  }

  std::vector<std::uint64_t> weights_;
  std::uint64_t player_weight_;
  std::uint64_t quota_;
  Side side_;
  unsigned aux_width_;
};

/// Voting circuit for player i; aux_width 0 selects the minimal width.
inline VotingCircuitOracle voting_value_circuit(const WeightedVotingGame& game, unsigned i, Side side,
                                                unsigned aux_width = 0) {
  if (i >= game.n_players()) throw DomainError("player index out of range");
  std::vector<std::uint64_t> reg;
  reg.reserve(game.n_players() - 1);
  for (unsigned j = 0; j < game.n_players(); ++j) {
    if (j != i) reg.push_back(game.weights()[j]);
  }
  if (aux_width == 0) aux_width = VotingCircuitOracle::required_aux_width(game.total_weight());
  return VotingCircuitOracle(std::move(reg), game.weights()[i], game.quota(), side, aux_width);
}

using ValueOracle = std::variant<DirectOracle, VotingCircuitOracle>;

inline unsigned oracle_aux_qubits(const ValueOracle& o) {
  return std::visit([](const auto& x) { return x.aux_qubits(); }, o);
}

inline unsigned oracle_input_qubits(const ValueOracle& o) {
  return std::visit([](const auto& x) { return x.input_qubits(); }, o);
}

inline Circuit oracle_circuit(const ValueOracle& o, const RegisterLayout& layout, QubitRange input) {
  return std::visit([&](const auto& x) { return x.circuit(layout, input); }, o);
}

/// Applies U_V with the player register as input.
inline void apply_uv(StateVector& state, const ValueOracle& oracle) {
  oracle_circuit(oracle, state.layout(), state.layout().pl()).apply(state);
}

/// Largest register for the block-diagonal construction.
inline constexpr unsigned kMaxNaivePlayers = 14;

/// Block-diagonal B+- on Pl (n qubits) and Ut: for each h the block
/// [[c, s], [s, -c]] with s^2 = gamma(n, |h|) v(h), i.e. Ry(theta) Z.
template <CooperativeGame G>
Circuit b_pm_circuit(const RegisterLayout& layout, const G& game, unsigned i, Side side) {
  const unsigned n = game.n_players() - 1;
  if (n > kMaxNaivePlayers) throw CapacityError("block-diagonal construction supports at most 14 players");
  if (layout.pl().count != n || layout.pt().count != 0 || layout.aux().count != 0 || layout.pl_prime().count != 0) {
    throw DomainError("layout must hold only Pl and Ut");
  }
  const std::vector<double> v = normalized_table(game, i, side);
  MultiplexedGate g{layout.ut(), layout.pl(), {}};
  g.matrices.reserve(v.size());
  for (std::uint64_t h = 0; h < v.size(); ++h) {
    const double p = gamma_weight(n, static_cast<unsigned>(std::popcount(h))) * v[h];
    g.matrices.push_back(multiply(ry(ry_angle_for_probability(p)), pauli_z()));
  }
  Circuit c(layout.total_qubits());
  c.add(std::move(g));
  return c;
}

template <CooperativeGame G>
void apply_b_pm(StateVector& state, const G& game, unsigned i, Side side) {
  b_pm_circuit(state.layout(), game, i, side).apply(state);
}

}  // namespace qshap::qsim

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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qshap/errors.hpp"
#include "qshap/qsim/state_vector.hpp"

namespace qshap::qsim {

/// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
using Mat2 = std::array<Amplitude, 4>;

inline Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }
inline Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }
inline Mat2 hadamard() {
  const double r = std::sqrt(0.5);
  return {r, r, r, -r};
}
/// Ry(theta) = [[cos, -sin], [sin, cos]] of theta / 2.
inline Mat2 ry(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {c, -s, s, c};
}

inline Mat2 adjoint(const Mat2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

inline Mat2 multiply(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

/// Ry angle that maps |0> to sqrt(1 - p)|0> + sqrt(p)|1>.
inline double ry_angle_for_probability(double p) {
  return 2.0 * std::atan2(std::sqrt(p), std::sqrt(1.0 - p));
}

/// Single-target gate whose 2x2 matrix is chosen by the value held in a
/// contiguous control range (a multiplexor). An empty range is a plain gate.
struct MultiplexedGate {
  unsigned target = 0;
  QubitRange controls;
  std::vector<Mat2> matrices;  // one per control value
};

/// Reversible classical map on basis indices.
struct PermutationGate {
  std::string name;
  std::function<std::uint64_t(std::uint64_t)> forward;
  std::function<std::uint64_t(std::uint64_t)> inverse;
};

using Gate = std::variant<MultiplexedGate, PermutationGate>;

namespace detail {

inline void apply_multiplexed(std::span<Amplitude> amps, const MultiplexedGate& g, bool adjoint_mode) {
  const std::uint64_t tbit = std::uint64_t{1} << g.target;
  std::vector<Mat2> mats = g.matrices;
  if (adjoint_mode) {
    for (Mat2& m : mats) m = adjoint(m);
  }
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & tbit) continue;
    const Mat2& m = mats[g.controls.extract(i)];
    const Amplitude a0 = amps[i];
    const Amplitude a1 = amps[i | tbit];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[i | tbit] = m[2] * a0 + m[3] * a1;
  }
}

inline void apply_permutation(std::span<Amplitude> amps, const std::function<std::uint64_t(std::uint64_t)>& f,
                              std::vector<Amplitude>& scratch) {
  scratch.assign(amps.size(), Amplitude{});
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (amps[i] != Amplitude{}) scratch[f(i)] += amps[i];
  }
  std::copy(scratch.begin(), scratch.end(), amps.begin());
}

}  // namespace detail

/// Ordered gate list acting on a fixed number of qubits.
class Circuit {
 public:
  explicit Circuit(unsigned num_qubits) : n_(num_qubits) {
    if (num_qubits > kMaxQubits) throw CapacityError("circuit exceeds the 26-qubit limit");
  }

  unsigned num_qubits() const { return n_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& add(MultiplexedGate g) {
    if (g.target >= n_ || g.controls.end() > n_ || g.controls.contains(g.target)) {
      throw DomainError("gate qubits out of range or overlapping");
    }
    if (g.matrices.size() != (std::size_t{1} << g.controls.count)) {
      throw DomainError("multiplexor needs one matrix per control value");
    }
    gates_.emplace_back(std::move(g));
    return *this;
  }

  Circuit& add(PermutationGate g) {
    gates_.emplace_back(std::move(g));
    return *this;
  }

  Circuit& single(unsigned target, const Mat2& m) { return add(MultiplexedGate{target, {}, {m}}); }
  /// Applies `m` to `target` when qubit `control` is 1.
  Circuit& controlled(unsigned control, unsigned target, const Mat2& m) {
    return add(MultiplexedGate{target, {control, 1}, {identity2(), m}});
  }

  Circuit& append(const Circuit& other) {
    if (other.n_ != n_) throw DomainError("circuit width mismatch");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
  }

  /// Gate-reversed adjoint.
  Circuit inverse() const {
    Circuit inv(n_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
      if (const auto* m = std::get_if<MultiplexedGate>(&*it)) {
        MultiplexedGate g = *m;
        for (Mat2& mat : g.matrices) mat = adjoint(mat);
        inv.gates_.emplace_back(std::move(g));
      } else {
        const auto& p = std::get<PermutationGate>(*it);
        inv.gates_.emplace_back(PermutationGate{p.name + "^-1", p.inverse, p.forward});
      }
    }
    return inv;
  }

  void apply(std::span<Amplitude> amps) const { run(amps, false); }
  void apply_inverse(std::span<Amplitude> amps) const { run(amps, true); }
  void apply(StateVector& s) const {
    check_width(s);
    apply(s.amplitudes());
  }
  void apply_inverse(StateVector& s) const {
    check_width(s);
    apply_inverse(s.amplitudes());
  }

 private:
  void check_width(const StateVector& s) const {
    if (s.num_qubits() != n_) throw DomainError("state width does not match circuit");
  }

  void run(std::span<Amplitude> amps, bool inverse_mode) const {
    if (amps.size() != (std::size_t{1} << n_)) throw DomainError("amplitude count does not match circuit");
    std::vector<Amplitude> scratch;
    const auto step = [&](const Gate& g) {
      if (const auto* m = std::get_if<MultiplexedGate>(&g)) {
        detail::apply_multiplexed(amps, *m, inverse_mode);
      } else {
        const auto& p = std::get<PermutationGate>(g);
        detail::apply_permutation(amps, inverse_mode ? p.inverse : p.forward, scratch);
      }
    };
    if (inverse_mode) {
      for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) step(*it);
    } else {
      for (const Gate& g : gates_) step(g);
    }
  }

  unsigned n_;
  std::vector<Gate> gates_;
};

}  // namespace qshap::qsim

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

#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qshap/errors.hpp"
#include "qshap/summation.hpp"

namespace qshap::qsim {

using Amplitude = std::complex<double>;

/// Hard ceiling on simulated qubits (2^26 amplitudes, 1 GiB).
inline constexpr unsigned kMaxQubits = 26;

/// Contiguous block of qubits; qubit q is bit q of the basis index.
struct QubitRange {
  unsigned first = 0;
  unsigned count = 0;

  unsigned end() const { return first + count; }
  bool contains(unsigned q) const { return q >= first && q < end(); }
  std::uint64_t mask() const {
    return count == 0 ? 0 : ((~std::uint64_t{0} >> (64 - count)) << first);
  }
  /// Register value held in basis index `idx`.
  std::uint64_t extract(std::uint64_t idx) const { return (idx & mask()) >> first; }
  /// Basis-index bits for register value `v`.
  std::uint64_t place(std::uint64_t v) const { return (v << first) & mask(); }
  unsigned qubit(unsigned j) const { return first + j; }
};

/// Register map Pt | Pl | Pl' | Aux | Ut, in that order from qubit 0.
class RegisterLayout {
 public:
  RegisterLayout(unsigned pt, unsigned pl, unsigned aux = 0, unsigned pl_prime = 0) {
    pt_ = {0, pt};
    pl_ = {pt_.end(), pl};
    pl_prime_ = {pl_.end(), pl_prime};
    aux_ = {pl_prime_.end(), aux};
    ut_ = aux_.end();
    if (total_qubits() > kMaxQubits) throw CapacityError("layout exceeds the 26-qubit limit");
  }

  QubitRange pt() const { return pt_; }
  QubitRange pl() const { return pl_; }
  QubitRange pl_prime() const { return pl_prime_; }
  QubitRange aux() const { return aux_; }
  unsigned ut() const { return ut_; }
  QubitRange ut_range() const { return {ut_, 1}; }
  unsigned total_qubits() const { return ut_ + 1; }

  friend bool operator==(const RegisterLayout& a, const RegisterLayout& b) {
    return a.pt_.count == b.pt_.count && a.pl_.count == b.pl_.count &&
           a.pl_prime_.count == b.pl_prime_.count && a.aux_.count == b.aux_.count;
  }

 private:
  QubitRange pt_;
  QubitRange pl_;
  QubitRange pl_prime_;
  QubitRange aux_;
  unsigned ut_ = 0;
};

/// Dense amplitude vector over a register layout, initialized to |0...0>.
class StateVector {
 public:
  explicit StateVector(const RegisterLayout& layout)
      : layout_(layout), amps_(std::size_t{1} << layout.total_qubits()) {
    amps_[0] = 1.0;
  }

  const RegisterLayout& layout() const { return layout_; }
  unsigned num_qubits() const { return layout_.total_qubits(); }
  std::size_t size() const { return amps_.size(); }

  std::span<Amplitude> amplitudes() { return amps_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude amplitude(std::uint64_t idx) const { return amps_.at(idx); }
  Amplitude& operator[](std::uint64_t idx) { return amps_[idx]; }
  const Amplitude& operator[](std::uint64_t idx) const { return amps_[idx]; }

  double probability(std::uint64_t idx) const { return std::norm(amps_.at(idx)); }

  double norm_squared() const {
    PairwiseSum s;
    for (const Amplitude& a : amps_) s.add(std::norm(a));
    return s.value();
  }

  /// Basis index for the given register values.
  std::uint64_t index(std::uint64_t pt, std::uint64_t pl, std::uint64_t aux = 0, std::uint64_t ut = 0,
                      std::uint64_t pl_prime = 0) const {
    return layout_.pt().place(pt) | layout_.pl().place(pl) | layout_.aux().place(aux) |
           layout_.pl_prime().place(pl_prime) | layout_.ut_range().place(ut);
  }

  /// True when every component with nonzero amplitude has zeros on `r`.
  bool register_is_zero(const QubitRange& r, double tol = 1e-14) const {
    const std::uint64_t m = r.mask();
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if ((i & m) != 0 && std::abs(amps_[i]) > tol) return false;
    }
    return true;
  }

 private:
  RegisterLayout layout_;
  std::vector<Amplitude> amps_;
};

/// Probability that qubit `q` reads 1.
inline double probability_of_one(std::span<const Amplitude> amps, unsigned q) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  PairwiseSum s;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & bit) s.add(std::norm(amps[i]));
  }
  return s.value();
}

/// Probability that the utility qubit reads 1.
inline double utility_expectation(const StateVector& state) {
  return probability_of_one(state.amplitudes(), state.layout().ut());
}

/// Marginal distribution over the values of register `r`.
inline std::vector<double> register_distribution(const StateVector& state, const QubitRange& r) {
  std::vector<double> p(std::size_t{1} << r.count, 0.0);
  const auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) p[r.extract(i)] += std::norm(amps[i]);
  return p;
}

inline constexpr char kDumpMagic[8] = {'Q', 'S', 'H', 'A', 'P', 'S', 'V', '1'};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4] = {};
  is.read(reinterpret_cast<char*>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_f64(std::ostream& os, double d) {
  std::uint64_t u = 0;
  std::memcpy(&u, &d, 8);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline double get_f64(std::istream& is) {
  unsigned char b[8] = {};
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int k = 0; k < 8; ++k) u |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  double d = 0;
  std::memcpy(&d, &u, 8);
  return d;
}

}  // namespace detail

/// Writes the header "QSHAPSV1", u32 qubit count, u32 zero, then
/// little-endian (re, im) doubles.
inline void dump_state(std::ostream& os, std::span<const Amplitude> amps, unsigned num_qubits) {
  if (amps.size() != (std::size_t{1} << num_qubits)) throw DomainError("amplitude count mismatch");
  os.write(kDumpMagic, 8);
  detail::put_u32(os, num_qubits);
  detail::put_u32(os, 0);
  for (const Amplitude& a : amps) {
    detail::put_f64(os, a.real());
    detail::put_f64(os, a.imag());
  }
}

inline void dump_state(std::ostream& os, const StateVector& s) { dump_state(os, s.amplitudes(), s.num_qubits()); }

/// Reads a dump written by dump_state.
inline std::vector<Amplitude> load_state(std::istream& is, unsigned* num_qubits = nullptr) {
  char magic[8] = {};
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kDumpMagic, 8) != 0) throw ParseError("not a state dump");
  const std::uint32_t q = detail::get_u32(is);
  (void)detail::get_u32(is);
  if (q > kMaxQubits) throw CapacityError("state dump exceeds the qubit limit");
  std::vector<Amplitude> amps(std::size_t{1} << q);
  for (Amplitude& a : amps) {
    const double re = detail::get_f64(is);
    const double im = detail::get_f64(is);
    a = {re, im};
  }
  if (!is) throw ParseError("truncated state dump");
  if (num_qubits) *num_qubits = q;
  return amps;
}

}  // namespace qshap::qsim

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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "qshap/errors.hpp"
#include "qshap/qsim/circuit.hpp"
#include "qshap/qsim/state_vector.hpp"
#include "qshap/rng.hpp"
#include "qshap/summation.hpp"

namespace qshap::qsim {

/// In-place radix-2 DFT: X[y] = sum_x a[x] exp(-2 pi i x y / N).
inline void fft(std::span<Amplitude> a) {
  const std::size_t n = a.size();
  if (n == 0 || !std::has_single_bit(n)) throw DomainError("fft length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Amplitude w = std::polar(1.0, ang * static_cast<double>(k));
        const Amplitude u = a[start + k];
        const Amplitude v = a[start + k + len / 2] * w;
        a[start + k] = u + v;
        a[start + k + len / 2] = u - v;
      }
    }
  }
}

/// Canonical phase-estimation amplitude estimation of the probability that
/// `good_qubit` reads 1 after `prep` acts on |0...0>.
///
/// The m-qubit phase register is simulated implicitly: the joint state after
/// the controlled powers of Q is sum_y |y> Q^y psi / sqrt(M), so the outcome
/// distribution follows from one DFT over y per system basis state. The
/// distribution is computed once at construction; each seeded run samples it.
class AmplitudeEstimator {
 public:
  AmplitudeEstimator(const Circuit& prep, unsigned good_qubit, std::uint64_t t) : t_(t) {
    if (t == 0 || !std::has_single_bit(t)) throw DomainError("t must be a power of two");
    const unsigned m = static_cast<unsigned>(std::countr_zero(t));
    const unsigned q = prep.num_qubits();
    if (good_qubit >= q) throw DomainError("good qubit out of range");
    if (m + q > kMaxQubits) throw CapacityError("phase and system registers exceed the 26-qubit budget");

    const std::size_t dim = std::size_t{1} << q;
    std::vector<Amplitude> psi(dim);
    psi[0] = 1.0;
    prep.apply(psi);
    mu_ = probability_of_one(psi, good_qubit);

    // rows[y * dim + s] = (Q^y psi)[s] with Q = -A S0 A^dagger S_chi.
    const std::uint64_t good = std::uint64_t{1} << good_qubit;
    std::vector<Amplitude> rows(static_cast<std::size_t>(t) * dim);
    std::copy(psi.begin(), psi.end(), rows.begin());
    for (std::uint64_t y = 1; y < t; ++y) {
      for (std::size_t s = 0; s < dim; ++s) {
        if (s & good) psi[s] = -psi[s];
      }
      prep.apply_inverse(psi);
      for (std::size_t s = 1; s < dim; ++s) psi[s] = -psi[s];
      prep.apply(psi);
      std::copy(psi.begin(), psi.end(), rows.begin() + static_cast<std::ptrdiff_t>(y * dim));
    }

    dist_.assign(t, 0.0);
    std::vector<Amplitude> col(t);
    const double inv_m2 = 1.0 / (static_cast<double>(t) * static_cast<double>(t));
    std::vector<PairwiseSum> acc(t);
    for (std::size_t s = 0; s < dim; ++s) {
      for (std::uint64_t y = 0; y < t; ++y) col[y] = rows[y * dim + s];
      fft(col);
      for (std::uint64_t y = 0; y < t; ++y) acc[y].add(std::norm(col[y]) * inv_m2);
    }
    for (std::uint64_t y = 0; y < t; ++y) dist_[y] = acc[y].value();
    cdf_.resize(t);
    PairwiseSum run;
    for (std::uint64_t y = 0; y < t; ++y) {
      run.add(dist_[y]);
      cdf_[y] = run.value();
    }
  }

  std::uint64_t t() const { return t_; }
  /// Exact good-subspace probability of the prepared state.
  double ideal_mu() const { return mu_; }
  /// Probability of each phase-register outcome y in [0, t).
  std::span<const double> outcome_distribution() const { return dist_; }

  static double outcome_to_estimate(std::uint64_t y, std::uint64_t t) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(y) / static_cast<double>(t));
    return s * s;
  }

  std::uint64_t sample_outcome(std::uint64_t seed) const {
    Rng rng(seed);
    const double u = uniform_unit(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(it - cdf_.begin()), t_ - 1);
  }

  /// One run: sin^2(pi y / t) for a sampled outcome y.
  double estimate(std::uint64_t seed) const { return outcome_to_estimate(sample_outcome(seed), t_); }

  /// Median of `repeats` runs seeded seed ^ r.
  double median_estimate(std::uint64_t seed, unsigned repeats) const {
    if (repeats == 0) throw DomainError("repeats must be positive");
    std::vector<double> xs(repeats);
    for (unsigned r = 0; r < repeats; ++r) xs[r] = estimate(seed ^ r);
    std::sort(xs.begin(), xs.end());
    return repeats % 2 == 1 ? xs[repeats / 2] : 0.5 * (xs[repeats / 2 - 1] + xs[repeats / 2]);
  }

  /// Probability that one run lands within `tolerance` of the exact value.
  double success_probability(double tolerance) const {
    double p = 0.0;
    for (std::uint64_t y = 0; y < t_; ++y) {
      if (std::abs(outcome_to_estimate(y, t_) - mu_) <= tolerance) p += dist_[y];
    }
    return p;
  }

 private:
  std::uint64_t t_;
  double mu_ = 0.0;
  std::vector<double> dist_;
  std::vector<double> cdf_;
};

/// Single-run convenience wrapper.
inline double amplitude_estimate(const Circuit& prep, unsigned good_qubit, std::uint64_t t, std::uint64_t seed) {
  return AmplitudeEstimator(prep, good_qubit, t).estimate(seed);
}

/// Number of repeats 2 ceil(log2(1/p)) + 1 for failure probability p.
inline unsigned median_repeats_for(double failure_probability) {
  if (!(failure_probability > 0.0 && failure_probability < 1.0)) throw DomainError("failure probability must be in (0, 1)");
  return 2 * static_cast<unsigned>(std::ceil(std::log2(1.0 / failure_probability))) + 1;
}

}  // namespace qshap::qsim

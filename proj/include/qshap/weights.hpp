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
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "qshap/errors.hpp"
#include "qshap/summation.hpp"

namespace qshap {

/// b_{n,m}(x) = x^m (1 - x)^(n - m).
inline double b_nm(unsigned n, unsigned m, double x) {
  if (m > n) throw DomainError("b_nm needs m <= n");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("b_nm needs x in [0, 1]");
  const unsigned r = n - m;
  if (n <= 40) return std::pow(x, m) * std::pow(1.0 - x, r);
  if ((m > 0 && x == 0.0) || (r > 0 && x == 1.0)) return 0.0;
  const double lg = (m > 0 ? m * std::log(x) : 0.0) + (r > 0 ? r * std::log1p(-x) : 0.0);
  return std::exp(lg);
}

/// Integral of b_{n,m} over [0, 1] by the recurrence
/// beta_{n,0} = 1/(n+1), beta_{n,m} = m / (n - m + 1) beta_{n,m-1}.
inline double beta_nm(unsigned n, unsigned m) {
  if (m > n) throw DomainError("beta_nm needs m <= n");
  // The integral is symmetric in m <-> n - m; recurse on the shorter side.
  const unsigned steps = std::min(m, n - m);
  double beta = 1.0 / (n + 1.0);
  for (unsigned k = 1; k <= steps; ++k) beta *= static_cast<double>(k) / (n - k + 1.0);
  return beta;
}

/// Partition register sizes handled by the weight tables.
inline constexpr unsigned kMaxEll = 24;

namespace detail {

inline void check_ell(unsigned ell) {
  if (ell > kMaxEll) throw CapacityError("partition register limited to 24 qubits");
}

inline void check_index(unsigned ell, std::uint64_t k, bool inclusive) {
  check_ell(ell);
  const std::uint64_t top = std::uint64_t{1} << ell;
  if (inclusive ? k > top : k >= top) throw DomainError("subinterval index out of range");
}

}  // namespace detail

/// sin^2 partition point t_ell(k) = sin^2(k pi / 2^(ell+1)).
inline double t_ell(unsigned ell, std::uint64_t k) {
  detail::check_index(ell, k, true);
  if (k == 0) return 0.0;
  if (k == (std::uint64_t{1} << ell)) return 1.0;
  const double s = std::sin(std::ldexp(std::numbers::pi * static_cast<double>(k), -static_cast<int>(ell) - 1));
  return s * s;
}

/// Width t(k+1) - t(k), evaluated as sin(b) sin(2a + b) to avoid cancellation.
inline double w_ell(unsigned ell, std::uint64_t k) {
  detail::check_index(ell, k, false);
  const double b = std::ldexp(std::numbers::pi, -static_cast<int>(ell) - 1);
  const double a = b * static_cast<double>(k);
  return std::sin(b) * std::sin(2.0 * a + b);
}

/// Sample point sin^2((k + 1/2) pi / 2^(ell+1)).
inline double t_prime(unsigned ell, std::uint64_t k) {
  detail::check_index(ell, k, false);
  const double s = std::sin(std::ldexp(std::numbers::pi * (static_cast<double>(k) + 0.5), -static_cast<int>(ell) - 1));
  return s * s;
}

/// Uniform-partition sample (k + 1/2) 2^-ell + perturbation, where the
/// perturbation models an imperfect arcsine evaluation.
inline double r_ell(unsigned ell, std::uint64_t k, double perturbation = 0.0) {
  detail::check_index(ell, k, false);
  const double half = std::ldexp(1.0, -static_cast<int>(ell) - 1);
  if (!(std::abs(perturbation) < half)) throw DomainError("perturbation must be below 2^-(ell+1)");
  const double lo = std::ldexp(static_cast<double>(k), -static_cast<int>(ell));
  const double hi = std::ldexp(static_cast<double>(k + 1), -static_cast<int>(ell));
  return std::clamp(lo + half + perturbation, lo, hi);
}

enum class PartitionKind { sin2, uniform };

inline const char* to_string(PartitionKind k) { return k == PartitionKind::sin2 ? "sin2" : "uniform"; }

/// Partition of [0, 1] into 2^ell subintervals with one sample point each.
class PartitionScheme {
 public:
  static PartitionScheme sin2(unsigned ell) {
    detail::check_ell(ell);
    return PartitionScheme(PartitionKind::sin2, ell, {});
  }

  /// Uniform partition. `perturbation` is empty (all zero) or holds one
  /// offset per subinterval, each strictly below 2^-(ell+1) in magnitude.
  static PartitionScheme uniform(unsigned ell, std::vector<double> perturbation = {}) {
    detail::check_ell(ell);
    if (!perturbation.empty()) {
      if (perturbation.size() != (std::size_t{1} << ell)) {
        throw DomainError("need one perturbation per subinterval");
      }
      for (std::uint64_t k = 0; k < perturbation.size(); ++k) (void)r_ell(ell, k, perturbation[k]);
    }
    return PartitionScheme(PartitionKind::uniform, ell, std::move(perturbation));
  }

  PartitionKind kind() const { return kind_; }
  unsigned ell() const { return ell_; }
  std::uint64_t intervals() const { return std::uint64_t{1} << ell_; }

  double point(std::uint64_t k) const {
    if (kind_ == PartitionKind::sin2) return t_ell(ell_, k);
    detail::check_index(ell_, k, true);
    return std::ldexp(static_cast<double>(k), -static_cast<int>(ell_));
  }

  double width(std::uint64_t k) const {
    if (kind_ == PartitionKind::sin2) return w_ell(ell_, k);
    detail::check_index(ell_, k, false);
    return std::ldexp(1.0, -static_cast<int>(ell_));
  }

  double sample(std::uint64_t k) const {
    if (kind_ == PartitionKind::sin2) return t_prime(ell_, k);
    return r_ell(ell_, k, perturbation_.empty() ? 0.0 : perturbation_[k]);
  }

  const std::vector<double>& perturbation() const { return perturbation_; }

  /// Constant c with |gamma_ell - gamma| <= c b_{n,m}(m/n):
  /// pi/2^ell for sin^2 points, 2^(1-ell) for uniform ones.
  double riemann_constant() const {
    return kind_ == PartitionKind::sin2 ? std::ldexp(std::numbers::pi, -static_cast<int>(ell_))
                                        : std::ldexp(2.0, -static_cast<int>(ell_));
  }

 private:
  PartitionScheme(PartitionKind kind, unsigned ell, std::vector<double> perturbation)
      : kind_(kind), ell_(ell), perturbation_(std::move(perturbation)) {}

  PartitionKind kind_;
  unsigned ell_;
  std::vector<double> perturbation_;
};

/// Riemann-sum approximation of gamma(n, m) under `scheme`.
inline double gamma_ell(unsigned n, unsigned m, const PartitionScheme& scheme) {
  if (m > n) throw DomainError("gamma_ell needs m <= n");
  PairwiseSum s;
  for (std::uint64_t k = 0; k < scheme.intervals(); ++k) {
    s.add(scheme.width(k) * b_nm(n, m, scheme.sample(k)));
  }
  return s.value();
}

struct DarbouxSums {
  double lower = 0.0;
  double upper = 0.0;
};

/// Lower and upper Darboux sums of b_{n,m} on the scheme's subintervals.
/// b_{n,m} rises on [0, m/n] and falls on [m/n, 1], so each extremum sits at
/// an endpoint or at the peak.
inline DarbouxSums darboux_sums(unsigned n, unsigned m, const PartitionScheme& scheme) {
  if (m > n) throw DomainError("darboux_sums needs m <= n");
  const double peak = n == 0 ? 0.0 : static_cast<double>(m) / n;
  PairwiseSum lo_sum;
  PairwiseSum hi_sum;
  for (std::uint64_t k = 0; k < scheme.intervals(); ++k) {
    const double a = scheme.point(k);
    const double b = scheme.point(k + 1);
    const double fa = b_nm(n, m, a);
    const double fb = b_nm(n, m, b);
    double lo = std::min(fa, fb);
    double hi = std::max(fa, fb);
    if (peak > a && peak < b) hi = std::max(hi, b_nm(n, m, peak));
    const double w = scheme.width(k);
    lo_sum.add(w * lo);
    hi_sum.add(w * hi);
  }
  return {lo_sum.value(), hi_sum.value()};
}

/// Bound on |gamma_ell(n, m) - gamma(n, m)|.
inline double riemann_weight_bound(unsigned n, unsigned m, const PartitionScheme& scheme) {
  const double peak = n == 0 ? 0.0 : static_cast<double>(m) / n;
  return scheme.riemann_constant() * b_nm(n, m, peak);
}

}  // namespace qshap

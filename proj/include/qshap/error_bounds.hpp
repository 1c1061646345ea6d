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

#include "qshap/errors.hpp"
#include "qshap/weights.hpp"

namespace qshap {

namespace detail {

inline double checked_range(double v_max, double v_min) {
  if (!(v_max >= v_min)) throw DomainError("need v_max >= v_min");
  return v_max - v_min;
}

}  // namespace detail

/// Step-1 bound (v_max - v_min) sqrt(n) / 2^(ell-3) for n >= 2 remaining players.
inline double step1_error_bound(unsigned n, unsigned ell, double v_max, double v_min) {
  if (n < 2) throw DomainError("step-1 bound needs n >= 2");
  const double range = detail::checked_range(v_max, v_min);
  return range * std::sqrt(static_cast<double>(n)) * std::ldexp(1.0, 3 - static_cast<int>(ell));
}

/// Step-1 bound valid for every n. For n >= 2 this is step1_error_bound;
/// below that the per-size Riemann bounds are summed directly:
/// range * sum_m C(n, m) c_ell b_{n,m}(m/n).
inline double step1_bound_any(unsigned n, double v_max, double v_min, const PartitionScheme& scheme) {
  const double range = detail::checked_range(v_max, v_min);
  if (n >= 2) return step1_error_bound(n, scheme.ell(), v_max, v_min);
  double total = 0.0;
  for (unsigned m = 0; m <= n; ++m) total += riemann_weight_bound(n, m, scheme);  // C(n, m) = 1 here
  return range * total;
}

/// Bound with an imperfect value oracle whose per-coalition error satisfies
/// |delta_h| <= delta_max:
/// range (sqrt(n)/2^(ell-3) delta_max + sqrt(n)/2^(ell-3) + delta_max).
inline double step1_oracle_error_bound(unsigned n, unsigned ell, double v_max, double v_min,
                                       double delta_max) {
  if (n < 2) throw DomainError("step-1 bound needs n >= 2");
  if (!(delta_max >= 0.0)) throw DomainError("delta_max must be non-negative");
  const double range = detail::checked_range(v_max, v_min);
  const double c = std::sqrt(static_cast<double>(n)) * std::ldexp(1.0, 3 - static_cast<int>(ell));
  return range * (c * delta_max + c + delta_max);
}

/// Amplitude-estimation error 2 pi sqrt(mu (1 - mu)) / t + pi^2 / t^2.
inline double qae_error_bound(double mu, std::uint64_t t) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
  if (t == 0) throw DomainError("t must be positive");
  const double td = static_cast<double>(t);
  return 2.0 * std::numbers::pi * std::sqrt(mu * (1.0 - mu)) / td + std::numbers::pi * std::numbers::pi / (td * td);
}

/// Looser form 2 pi (t sqrt(mu) + pi) / t^2, which dominates qae_error_bound.
inline double qae_error_bound_simple(double mu, std::uint64_t t) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
  if (t == 0) throw DomainError("t must be positive");
  const double td = static_cast<double>(t);
  return 2.0 * std::numbers::pi * (td * std::sqrt(mu) + std::numbers::pi) / (td * td);
}

/// qae_error_bound maximized over mu (mu = 1/2).
inline double qae_error_bound_worst(std::uint64_t t) { return qae_error_bound(0.5, t); }

/// lambda = (v_max - v_min) / epsilon.
inline double lambda_factor(double epsilon, double v_max, double v_min) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double range = detail::checked_range(v_max, v_min);
  if (!(range > 0.0)) throw DomainError("need v_max > v_min");
  return range / epsilon;
}

/// Partition register size ceil(log2(lambda sqrt(n))) + 5, at least 1.
inline unsigned choose_ell(unsigned n, double epsilon, double v_max, double v_min) {
  const double lambda = lambda_factor(epsilon, v_max, v_min);
  const double x = std::log2(lambda * std::sqrt(static_cast<double>(std::max(n, 1U))));
  const double ell = std::ceil(x - 1e-12) + 5.0;
  return ell < 1.0 ? 1U : static_cast<unsigned>(ell);
}

/// Iteration count ceil(28 sqrt((phi - v_min)(v_max - v_min)) / epsilon).
inline std::uint64_t choose_t(double phi_lower, double epsilon, double v_max, double v_min) {
  const double range = v_max - v_min;
  (void)lambda_factor(epsilon, v_max, v_min);
  const double gap = std::max(phi_lower - v_min, 0.0);
  const double t = std::ceil(28.0 * std::sqrt(gap * range) / epsilon - 1e-9);
  return t < 1.0 ? 1U : static_cast<std::uint64_t>(t);
}

/// Smallest power of two >= t.
inline std::uint64_t next_power_of_two(std::uint64_t t) {
  std::uint64_t p = 1;
  while (p < t) p <<= 1;
  return p;
}

/// Reported CNOT cost of preparing the sin^2 partition register.
inline double d_ell_cnot_count(unsigned ell) { return 23.0 / 24.0 * std::ldexp(1.0, static_cast<int>(ell)); }

}  // namespace qshap

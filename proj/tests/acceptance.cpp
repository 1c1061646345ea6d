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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qshap/qshap.hpp"

namespace {

using namespace qshap;
using Clock = std::chrono::steady_clock;

constexpr double kEightOverPiSquared = 8.0 / (std::numbers::pi * std::numbers::pi);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int failures = 0;

void run(int id, const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs <= time_limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s [%2d] %-28s %s; %.3f s (limit %g s)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              time_limit_s, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

const WeightedVotingGame& three_voters() {
  static const WeightedVotingGame g({3, 2, 1}, 4);
  return g;
}

Outcome exact_oracle() {
  const auto start = Clock::now();
  const ShapleyVector v = exact_shapley_all(three_voters());
  const double us = std::chrono::duration<double, std::micro>(Clock::now() - start).count();
  const double err = std::max({std::abs(v[0] - 2.0 / 3.0), std::abs(v[1] - 1.0 / 6.0), std::abs(v[2] - 1.0 / 6.0)});
  const bool sums = std::abs(v.sum() - three_voters().value(Coalition::full(3))) <= 1e-12;
  return {err <= 1e-12 && sums && us < 1000.0, fmt("max error %.2e, computed in %.1f us", err, us)};
}

Outcome ell_two_numbers() {
  EstimatorConfig c;
  c.ell = 2;
  double worst = 0.0;
  const double target[3] = {0.6617, 0.1616, 0.1616};
  std::vector<double> got;
  for (unsigned i = 0; i < 3; ++i) {
    got.push_back(estimate_shapley(three_voters(), i, c).value);
    worst = std::max(worst, std::abs(got.back() - target[i]));
  }
  return {worst <= 5e-4, fmt("estimates %.4f %.4f %.4f", got[0], got[1], got[2])};
}

SweepResult& sweep() {
  static SweepResult r = run_error_sweep(figure5_spec(true));
  return r;
}

Outcome step_one_bound() {
  const SweepResult& r = sweep();
  std::size_t violations = 0;
  for (const ResultRow& row : r.rows) {
    const unsigned n = static_cast<unsigned>(std::stoul(row.scenario.substr(1))) - 1;
    if (row.abs_error > step1_error_bound(n, row.ell, 1.0, 0.0)) ++violations;
  }
  const std::size_t games = figure5_spec(true).games_per_condition * figure5_spec(true).scenarios.size();
  return {violations == 0 && games >= 256,
          fmt("%.0f games, %.0f estimates, %.0f violations", static_cast<double>(games),
              static_cast<double>(r.rows.size()), static_cast<double>(violations))};
}

Outcome decay() {
  const double f = mean_decay_factor(sweep().summary, true);
  return {f >= 1.5, fmt("mean max-error ratio per ell step %.3f", f)};
}

Outcome beta_equals_gamma() {
  double worst = 0.0;
  for (unsigned n = 0; n <= 30; ++n) {
    for (unsigned m = 0; m <= n; ++m) worst = std::max(worst, std::abs(beta_nm(n, m) - gamma_weight(n, m)));
  }
  Rng rng(20);
  double worst_quad = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto n = static_cast<unsigned>(uniform_below(rng, 31));
    const auto m = static_cast<unsigned>(uniform_below(rng, n + 1));
    const auto f = [n, m](double x) { return std::pow(x, m) * std::pow(1.0 - x, n - m); };
    const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
    worst_quad = std::max(worst_quad, std::abs(beta_nm(n, m) - q));
  }
  return {worst <= 1e-12 && worst_quad <= 1e-10, fmt("recurrence %.2e, quadrature %.2e", worst, worst_quad)};
}

Outcome riemann_bound() {
  std::size_t checked = 0;
  std::size_t bad = 0;
  double worst_ratio = 0.0;
  for (unsigned ell = 0; ell <= 10; ++ell) {
    const PartitionScheme schemes[2] = {PartitionScheme::sin2(ell), PartitionScheme::uniform(ell)};
    const double constants[2] = {std::ldexp(std::numbers::pi, -static_cast<int>(ell)), std::ldexp(1.0, 1 - static_cast<int>(ell))};
    for (int s = 0; s < 2; ++s) {
      for (unsigned n = 0; n <= 10; ++n) {
        for (unsigned m = 0; m <= n; ++m) {
          const double peak = n == 0 ? 0.0 : static_cast<double>(m) / n;
          const double bound = constants[s] * b_nm(n, m, peak);
          const double err = std::abs(gamma_ell(n, m, schemes[s]) - gamma_weight(n, m));
          ++checked;
          if (err > bound) ++bad;
          worst_ratio = std::max(worst_ratio, err / bound);
        }
      }
    }
  }
  return {bad == 0, fmt("%.0f cases, %.0f violations, worst error/bound %.3f", static_cast<double>(checked),
                        static_cast<double>(bad), worst_ratio)};
}

Outcome qae_contract() {
  std::vector<qsim::Circuit> preps;
  const PartitionScheme scheme = PartitionScheme::sin2(3);
  for (unsigned i = 0; i < 3; ++i) {
    for (Side side : {Side::plus, Side::minus}) {
      const Pipeline p = efficient_pipeline(three_voters(), i, side, scheme);
      preps.push_back(p.circuit);
    }
  }
  double worst_rate = 1.0;
  double worst_exact = 1.0;
  std::size_t cases = 0;
  for (std::uint64_t t : {16ULL, 64ULL, 256ULL}) {
    std::vector<std::pair<qsim::Circuit, unsigned>> all;
    for (const qsim::Circuit& c : preps) all.emplace_back(c, c.num_qubits() - 1);
    // Exactly representable target and two random targets on one qubit.
    Rng rng(t);
    for (double mu : {std::pow(std::sin(5 * std::numbers::pi / static_cast<double>(t)), 2),
                      uniform_unit(rng), uniform_unit(rng)}) {
      qsim::Circuit c(1);
      c.single(0, qsim::ry(qsim::ry_angle_for_probability(mu)));
      all.emplace_back(c, 0);
    }
    for (const auto& [c, good] : all) {
      const qsim::AmplitudeEstimator ae(c, good, t);
      const double bound = qae_error_bound(ae.ideal_mu(), t);
      int hits = 0;
      for (int r = 0; r < 500; ++r) hits += std::abs(ae.estimate(mix_seed(t, cases, r)) - ae.ideal_mu()) <= bound;
      worst_rate = std::min(worst_rate, hits / 500.0);
      worst_exact = std::min(worst_exact, ae.success_probability(bound));
      ++cases;
    }
  }
  return {worst_rate >= kEightOverPiSquared && worst_exact >= kEightOverPiSquared,
          fmt("worst of 500 runs %.3f, worst exact probability %.4f (need %.4f)", worst_rate, worst_exact,
              kEightOverPiSquared)};
}

Outcome speedup_shape() {
  const CompareResult r = compare_methods(CompareSpec{});
  const bool mc_ok = std::abs(r.mc_permutation_slope + 0.5) <= 0.1 && std::abs(r.mc_stratified_slope + 0.5) <= 0.1;
  const bool qae_ok = std::abs(r.qae_slope + 1.0) <= 0.15;
  return {mc_ok && qae_ok, fmt("slopes: mc-permutation %.3f, mc-stratified %.3f, qae %.3f", r.mc_permutation_slope,
                               r.mc_stratified_slope, r.qae_slope)};
}

Outcome local_explanations() {
  const ClassifierGame base(3, {0.0, 0.1, 0.2, 0.7, 0.3, 0.8, 0.9, 1.0});
  double worst_ratio = 0.0;
  bool ok = true;
  for (std::uint64_t anchor = 0; anchor < 8; ++anchor) {
    const LocalExplanationGame g(AnyGame(base), Coalition(anchor, 3));
    if (is_degenerate(g)) continue;
    for (unsigned ell : {2U, 4U, 6U, 8U}) {
      EstimatorConfig c;
      c.ell = ell;
      for (unsigned i = 0; i < 3; ++i) {
        const ShapleyEstimate e = estimate_local_explanation(g, i, c);
        const double err = std::abs(e.value - exact_shapley(g, i));
        const double bound = step1_error_bound(2, ell, g.v_max(), g.v_min());
        ok = ok && err <= bound;
        worst_ratio = std::max(worst_ratio, err / bound);
      }
    }
  }
  return {ok, fmt("8 anchors x ell {2,4,6,8}, worst error/bound %.4f", worst_ratio)};
}

Outcome error_injection() {
  Rng rng(10);
  int trials = 0;
  int within = 0;
  for (double delta : {0.01, 0.05}) {
    for (int k = 0; k < 100; ++k) {
      const unsigned players = 3 + static_cast<unsigned>(uniform_below(rng, 4));
      const WeightedVotingGame g = generate_random_voting_game(players, 2 * players, rng);
      const unsigned i = static_cast<unsigned>(uniform_below(rng, players));
      const unsigned ell = 2 + static_cast<unsigned>(uniform_below(rng, 7));
      std::vector<qsim::DirectOracle> sides;
      for (Side side : {Side::plus, Side::minus}) {
        std::vector<double> v = normalized_table(g, i, side);
        for (double& x : v) x = std::clamp(x + delta * uniform_real(rng, -1.0, 1.0), 0.0, 1.0);
        sides.push_back({std::move(v)});
      }
      const double est = estimate_with_oracles(sides[0], sides[1], PartitionScheme::sin2(ell), 1.0, 0.0);
      const double bound = step1_oracle_error_bound(players - 1, ell, 1.0, 0.0, delta);
      ++trials;
      within += std::abs(est - exact_shapley(g, i)) <= bound;
    }
  }
  return {within == trials, fmt("%.0f of %.0f trials within the bound", within, trials)};
}

}  // namespace

int main() {
  run(1, "exact oracle", 1.0, exact_oracle);
  run(2, "ell=2 reference numbers", 1.0, ell_two_numbers);
  run(3, "step-1 error bound sweep", 600.0, step_one_bound);
  run(4, "exponential decay", 600.0, decay);
  run(5, "beta equals gamma", 10.0, beta_equals_gamma);
  run(6, "riemann weight bound", 10.0, riemann_bound);
  run(7, "amplitude estimation", 120.0, qae_contract);
  run(8, "query scaling", 600.0, speedup_shape);
  run(9, "local explanations", 30.0, local_explanations);
  run(10, "error injection", 60.0, error_injection);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}

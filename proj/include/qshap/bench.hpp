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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qshap/error_bounds.hpp"
#include "qshap/errors.hpp"
#include "qshap/exact.hpp"
#include "qshap/game_io.hpp"
#include "qshap/game.hpp"
#include "qshap/mc.hpp"
#include "qshap/qshapley.hpp"
#include "qshap/report.hpp"
#include "qshap/rng.hpp"

namespace qshap {

/// Random voting game with positive integer weights and q <= sum(w) < 2q.
/// Raw weights in [1, q] are rescaled toward a random total in [q, 2q-1]
/// and rounded; draws that miss the window are rejected.
inline WeightedVotingGame generate_random_voting_game(unsigned players, std::uint64_t quota, Rng& rng) {
  if (players == 0) throw DomainError("need at least one player");
  if (quota == 0) throw DomainError("quota must be positive");
  if (players > Coalition::kMaxPlayers) throw CapacityError("voting games support at most 63 players");
  constexpr int kMaxAttempts = 100000;
  std::vector<std::uint64_t> w(players);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    double raw_total = 0.0;
    std::vector<double> raw(players);
    for (double& x : raw) {
      x = static_cast<double>(1 + uniform_below(rng, quota));
      raw_total += x;
    }
    const double target = static_cast<double>(quota + uniform_below(rng, quota));
    std::uint64_t sum = 0;
    for (unsigned j = 0; j < players; ++j) {
      w[j] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(raw[j] * target / raw_total)));
      sum += w[j];
    }
    if (sum >= quota && sum < 2 * quota) return WeightedVotingGame(w, quota);
  }
  throw GenerationError("could not draw weights with q <= sum < 2q");
}

struct Scenario {
  unsigned players = 4;
  std::uint64_t quota = 8;

  std::string key() const { return "p" + std::to_string(players) + "-q" + std::to_string(quota); }
};

struct ExperimentSpec {
  std::vector<Scenario> scenarios;
  unsigned games_per_condition = 16;
  std::vector<unsigned> ells;
  Method method = Method::efficient;
  Extraction extraction = Extraction::ideal;
  std::optional<std::uint64_t> t;  ///< required for qae extraction
  std::uint64_t seed = 1;
  unsigned threads = 0;            ///< 0 = hardware concurrency
};

/// The four voting scenarios (players 4/6/8/10, quotas 8/16/32/32), ell 2..8.
inline ExperimentSpec figure5_spec(bool paper_scale = false) {
  ExperimentSpec s;
  s.scenarios = {{4, 8}, {6, 16}, {8, 32}, {10, 32}};
  s.games_per_condition = paper_scale ? 64 : 16;
  s.ells = {2, 3, 4, 5, 6, 7, 8};
  return s;
}

inline Method parse_method(const std::string& s) {
  if (s == "naive") return Method::naive;
  if (s == "efficient") return Method::efficient;
  if (s == "improved") return Method::improved;
  throw ParseError("unknown method: " + s);
}

inline Extraction parse_extraction(const std::string& s) {
  if (s == "ideal") return Extraction::ideal;
  if (s == "qae") return Extraction::qae;
  throw ParseError("unknown extraction: " + s);
}

/// Reads a sweep specification; unknown keys are rejected.
inline ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
  detail::require_keys(j, {"scenarios", "games_per_condition", "ell", "method", "extraction", "t", "seed", "threads"});
  ExperimentSpec s;
  try {
    for (const auto& sc : j.at("scenarios")) {
      detail::require_keys(sc, {"players", "quota"});
      s.scenarios.push_back({sc.at("players").get<unsigned>(), sc.at("quota").get<std::uint64_t>()});
    }
    s.games_per_condition = j.value("games_per_condition", s.games_per_condition);
    s.ells = j.value("ell", std::vector<unsigned>{});
    if (j.contains("method")) s.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("extraction")) s.extraction = parse_extraction(j.at("extraction").get<std::string>());
    if (j.contains("t")) s.t = j.at("t").get<std::uint64_t>();
    s.seed = j.value("seed", s.seed);
    s.threads = j.value("threads", s.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad experiment spec: ") + e.what());
  }
  for (const Scenario& sc : s.scenarios) {
    if (sc.quota == 0) throw ParseError("scenario quota must be positive");
  }
  return s;
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return experiment_spec_from_json(j);
}

/// Aggregate over all players of all games in one (scenario, ell) cell.
struct ConditionSummary {
  std::string scenario;
  unsigned ell = 0;
  std::size_t estimates = 0;
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
  double bound = 0.0;
  std::size_t violations = 0;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<ConditionSummary> summary;
};

/// Seed of game `g` in scenario `s`; independent of ell.
inline std::uint64_t game_seed(std::uint64_t seed, std::size_t scenario, std::size_t game) {
  return mix_seed(seed, scenario, game);
}

/// Runs `count` independent jobs over a thread pool; job k writes only slot k.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job job) {
  unsigned workers = threads != 0 ? threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count && !failed; k = next++) {
        try {
          job(k);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline std::string method_label(Method m, Extraction e) { return std::string(to_string(m)) + "-" + to_string(e); }

/// Error sweep over scenarios x ell: every player of every generated game is
/// estimated and compared to the exact value. Rows are ordered by scenario,
/// ell, game and player regardless of thread scheduling.
inline SweepResult run_error_sweep(const ExperimentSpec& spec) {
  if (spec.extraction == Extraction::qae && !spec.t) throw DomainError("qae sweeps need t");
  for (unsigned ell : spec.ells) {
    if (ell > 10) throw CapacityError("sweeps support ell <= 10");
  }
  for (const Scenario& sc : spec.scenarios) {
    if (sc.players > 10) throw CapacityError("sweeps support at most 10 players");
  }
  struct Job {
    std::size_t scenario;
    std::size_t game;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
    for (std::size_t g = 0; g < spec.games_per_condition; ++g) jobs.push_back({s, g});
  }
  // per job: rows[ell index][player]
  std::vector<std::vector<std::vector<ResultRow>>> slots(jobs.size());
  const std::string label = method_label(spec.method, spec.extraction);
  parallel_for(jobs.size(), spec.threads, [&](std::size_t k) {
    const Scenario& sc = spec.scenarios[jobs[k].scenario];
    const std::uint64_t seed = game_seed(spec.seed, jobs[k].scenario, jobs[k].game);
    Rng rng(seed);
    const WeightedVotingGame game = generate_random_voting_game(sc.players, sc.quota, rng);
    const ShapleyVector exact = exact_shapley_all(game);
    auto& out = slots[k];
    out.resize(spec.ells.size());
    for (std::size_t e = 0; e < spec.ells.size(); ++e) {
      EstimatorConfig cfg;
      cfg.method = spec.method;
      cfg.extraction = spec.extraction;
      cfg.ell = spec.ells[e];
      cfg.t = spec.t;
      cfg.seed = seed;
      for (unsigned i = 0; i < sc.players; ++i) {
        const ShapleyEstimate est = estimate_shapley(game, i, cfg);
        out[e].push_back({sc.key(), spec.ells[e], label, i, est.value, exact[i], std::abs(est.value - exact[i]),
                          est.total_bound, seed});
      }
    }
  });

  SweepResult result;
  for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
    for (std::size_t e = 0; e < spec.ells.size(); ++e) {
      ConditionSummary sum;
      sum.scenario = spec.scenarios[s].key();
      sum.ell = spec.ells[e];
      PairwiseSum err;
      for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (jobs[k].scenario != s) continue;
        for (const ResultRow& r : slots[k][e]) {
          result.rows.push_back(r);
          err.add(r.abs_error);
          sum.max_abs_error = std::max(sum.max_abs_error, r.abs_error);
          sum.bound = std::max(sum.bound, r.bound);
          if (r.abs_error > r.bound) ++sum.violations;
          ++sum.estimates;
        }
      }
      sum.mean_abs_error = sum.estimates ? err.value() / static_cast<double>(sum.estimates) : 0.0;
      result.summary.push_back(sum);
    }
  }
  return result;
}

/// Geometric mean of max_abs_error(ell) / max_abs_error(ell + 1) over
/// consecutive ell pairs of every scenario. Pairs with a zero error are
/// skipped.
inline double mean_decay_factor(const std::vector<ConditionSummary>& summary, bool use_max = true) {
  double log_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t k = 0; k + 1 < summary.size(); ++k) {
    const ConditionSummary& a = summary[k];
    const ConditionSummary& b = summary[k + 1];
    if (a.scenario != b.scenario || b.ell != a.ell + 1) continue;
    const double ea = use_max ? a.max_abs_error : a.mean_abs_error;
    const double eb = use_max ? b.max_abs_error : b.mean_abs_error;
    if (ea <= 0.0 || eb <= 0.0) continue;
    log_sum += std::log(ea / eb);
    ++pairs;
  }
  return pairs ? std::exp(log_sum / static_cast<double>(pairs)) : 0.0;
}

inline nlohmann::json sweep_to_json(const SweepResult& r) {
  nlohmann::json j = rows_to_json(r.rows);
  nlohmann::json summary = nlohmann::json::array();
  for (const ConditionSummary& s : r.summary) {
    summary.push_back({{"scenario", s.scenario},
                       {"ell", s.ell},
                       {"estimates", s.estimates},
                       {"mean_abs_error", s.mean_abs_error},
                       {"max_abs_error", s.max_abs_error},
                       {"bound", s.bound},
                       {"violations", s.violations}});
  }
  j["summary"] = summary;
  return j;
}

inline void write_summary_csv(std::ostream& os, const std::vector<ConditionSummary>& summary) {
  os << "scenario,ell,estimates,mean_abs_error,max_abs_error,bound,violations\n";
  for (const ConditionSummary& s : summary) {
    os << s.scenario << ',' << s.ell << ',' << s.estimates << ',' << format_double(s.mean_abs_error) << ','
       << format_double(s.max_abs_error) << ',' << format_double(s.bound) << ',' << s.violations << '\n';
  }
}

// ---------------------------------------------------------------------------
// Error versus value-oracle queries.

struct CompareSpec {
  unsigned players = 3;
  std::uint64_t quota = 4;
  unsigned games = 4;
  unsigned ell = 8;
  std::vector<std::uint64_t> t_values = {16, 32, 64, 128, 256, 512, 1024};
  std::vector<std::uint64_t> mc_samples = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  unsigned runs = 64;      ///< seeded repetitions per point
  unsigned repeats = 5;    ///< median-of-repeats for the quantum estimator
  std::uint64_t seed = 1;
};

struct CompareRow {
  std::string method;
  std::uint64_t queries = 0;  ///< per Shapley estimate
  double mean_abs_error = 0.0;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  double mc_permutation_slope = 0.0;
  double mc_stratified_slope = 0.0;
  double qae_slope = 0.0;
};

/// Least-squares slope of log(error) on log(queries) for one method.
inline double loglog_slope(const std::vector<CompareRow>& rows, const std::string& method) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const CompareRow& r : rows) {
    if (r.method != method || r.mean_abs_error <= 0.0) continue;
    const double x = std::log(static_cast<double>(r.queries));
    const double y = std::log(r.mean_abs_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

/// Monte Carlo (both strategies) and median-of-repeats amplitude estimation
/// on random small voting games, all players, errors against exact values.
/// Quantum queries count 2t oracle calls per run and side.
inline CompareResult compare_methods(const CompareSpec& spec) {
  if (spec.players > 5) throw CapacityError("comparison supports at most 5 players");
  if (spec.runs == 0 || spec.games == 0) throw DomainError("need at least one game and run");
  std::vector<WeightedVotingGame> games;
  std::vector<ShapleyVector> exact;
  for (unsigned g = 0; g < spec.games; ++g) {
    Rng rng(game_seed(spec.seed, 0, g));
    games.push_back(generate_random_voting_game(spec.players, spec.quota, rng));
    exact.push_back(exact_shapley_all(games.back()));
  }

  CompareResult out;
  for (McStrategy strategy : {McStrategy::permutation, McStrategy::size_stratified}) {
    for (std::uint64_t samples : spec.mc_samples) {
      PairwiseSum err;
      std::size_t count = 0;
      for (unsigned g = 0; g < spec.games; ++g) {
        for (unsigned i = 0; i < spec.players; ++i) {
          for (unsigned r = 0; r < spec.runs; ++r) {
            const McConfig cfg{samples, mix_seed(spec.seed, (std::uint64_t{g} << 32) | i, r), strategy};
            err.add(std::abs(mc_shapley(games[g], i, cfg).estimate - exact[g][i]));
            ++count;
          }
        }
      }
      out.rows.push_back({to_string(strategy), 2 * samples, err.value() / static_cast<double>(count), count, spec.seed});
    }
  }

  const PartitionScheme scheme = PartitionScheme::sin2(spec.ell);
  for (std::uint64_t t : spec.t_values) {
    PairwiseSum err;
    std::size_t count = 0;
    for (unsigned g = 0; g < spec.games; ++g) {
      for (unsigned i = 0; i < spec.players; ++i) {
        const Pipeline plus = efficient_pipeline(games[g], i, Side::plus, scheme);
        const Pipeline minus = efficient_pipeline(games[g], i, Side::minus, scheme);
        const qsim::AmplitudeEstimator ae_plus(plus.circuit, plus.layout.ut(), t);
        const qsim::AmplitudeEstimator ae_minus(minus.circuit, minus.layout.ut(), t);
        for (unsigned r = 0; r < spec.runs; ++r) {
          const std::uint64_t base = mix_seed(spec.seed, (std::uint64_t{g} << 32) | i, r);
          const double est = ae_plus.median_estimate(mix64(base ^ 1), spec.repeats) -
                             ae_minus.median_estimate(mix64(base ^ 2), spec.repeats);
          err.add(std::abs(est - exact[g][i]));
          ++count;
        }
      }
    }
    out.rows.push_back({"qae", 2 * spec.repeats * 2 * t, err.value() / static_cast<double>(count), count, spec.seed});
  }
  out.mc_permutation_slope = loglog_slope(out.rows, "mc-permutation");
  out.mc_stratified_slope = loglog_slope(out.rows, "mc-stratified");
  out.qae_slope = loglog_slope(out.rows, "qae");
  return out;
}

inline void write_compare_csv(std::ostream& os, const CompareResult& r) {
  os << "method,queries,mean_abs_error,runs,seed\n";
  for (const CompareRow& row : r.rows) {
    os << row.method << ',' << row.queries << ',' << format_double(row.mean_abs_error) << ',' << row.runs << ','
       << row.seed << '\n';
  }
}

inline nlohmann::json compare_to_json(const CompareResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CompareRow& row : r.rows) {
    rows.push_back({{"method", row.method},
                    {"queries", row.queries},
                    {"mean_abs_error", row.mean_abs_error},
                    {"runs", row.runs},
                    {"seed", row.seed}});
  }
  return {{"schema_version", kSchemaVersion},
          {"rows", rows},
          {"slopes",
           {{"mc-permutation", r.mc_permutation_slope}, {"mc-stratified", r.mc_stratified_slope}, {"qae", r.qae_slope}}}};
}

}  // namespace qshap

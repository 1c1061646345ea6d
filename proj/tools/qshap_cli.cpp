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

// qshap command-line harness.
//
//   qshap [--seed N] [--out FILE] [--format csv|json] <command> [options]
//
// Commands: exact, mc, quantum, explain, sweep, alice, compare.
// Exit status: 0 success, 1 a built-in check failed, 2 bad input,
// 3 a request exceeded a capacity or domain limit.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qshap/qshap.hpp"

namespace {

using namespace qshap;

struct GlobalOptions {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
};

struct GameOptions {
  std::string file;
  std::vector<std::uint64_t> weights;
  std::uint64_t quota = 0;
  std::optional<unsigned> player;

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("--game", file, "game-spec JSON file");
    auto* w = cmd->add_option("--weights", weights, "inline voting weights, e.g. 3,2,1")->delimiter(',');
    auto* q = cmd->add_option("--quota", quota, "inline voting quota");
    f->excludes(w)->excludes(q);
    w->needs(q);
    q->needs(w);
    cmd->add_option("--player", player, "only this player (default: all)");
  }

  AnyGame load() const {
    if (!file.empty()) return load_game_file(file);
    if (weights.empty()) throw ParseError("give --game or --weights/--quota");
    return WeightedVotingGame(weights, quota);
  }

  std::vector<unsigned> players(unsigned n) const {
    if (player) {
      if (*player >= n) throw DomainError("player index out of range");
      return {*player};
    }
    std::vector<unsigned> all(n);
    for (unsigned i = 0; i < n; ++i) all[i] = i;
    return all;
  }
};

/// Output stream chosen by --out; stdout when unset.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParseError("cannot write " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string scenario_label(const AnyGame& g) {
  return std::string(to_string(g.kind())) + "-n" + std::to_string(g.n_players());
}

void emit_rows(const GlobalOptions& opt, const std::vector<ResultRow>& rows) {
  Sink sink(opt.out);
  if (opt.format == "json") {
    sink.os() << rows_to_json(rows).dump(2) << '\n';
  } else {
    write_csv(sink.os(), rows);
  }
}

std::optional<double> exact_if_feasible(const AnyGame& g, unsigned i) {
  if (g.n_players() > kMaxExactPlayers) return std::nullopt;
  return exact_shapley(g, i);
}

ResultRow make_row(const AnyGame& g, unsigned ell, const std::string& method, unsigned i, double estimate,
                   double bound, std::uint64_t seed) {
  const std::optional<double> exact = exact_if_feasible(g, i);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {scenario_label(g), ell, method, i, estimate, exact.value_or(nan),
          exact ? std::abs(estimate - *exact) : nan, bound, seed};
}

int cmd_exact(const GlobalOptions& opt, const GameOptions& game_opt) {
  const AnyGame g = game_opt.load();
  std::vector<ResultRow> rows;
  for (unsigned i : game_opt.players(g.n_players())) {
    const double v = exact_shapley(g, i);
    rows.push_back({scenario_label(g), 0, "exact", i, v, v, 0.0, 0.0, opt.seed});
  }
  emit_rows(opt, rows);
  return 0;
}

struct McOptions {
  std::uint64_t samples = 1000;
  std::string strategy = "permutation";
};

int cmd_mc(const GlobalOptions& opt, const GameOptions& game_opt, const McOptions& mc) {
  const AnyGame g = game_opt.load();
  const McStrategy strategy = mc.strategy == "stratified" ? McStrategy::size_stratified : McStrategy::permutation;
  std::vector<ResultRow> rows;
  for (unsigned i : game_opt.players(g.n_players())) {
    const McEstimate e = mc_shapley(g, i, McConfig{mc.samples, mix_seed(opt.seed, i, 0), strategy});
    rows.push_back(make_row(g, 0, to_string(strategy), i, e.estimate, e.std_error, opt.seed));
  }
  emit_rows(opt, rows);
  return 0;
}

struct QuantumOptions {
  std::string method = "efficient";
  std::string extraction = "ideal";
  std::string oracle = "direct";
  std::optional<unsigned> ell;
  std::optional<std::uint64_t> t;
  std::optional<double> epsilon;
  unsigned repeats = 5;
  std::string anchor;

  void attach(CLI::App* cmd, bool with_oracle) {
    cmd->add_option("--method", method, "naive, efficient or improved")
        ->check(CLI::IsMember({"naive", "efficient", "improved"}));
    cmd->add_option("--extraction", extraction, "ideal or qae")->check(CLI::IsMember({"ideal", "qae"}));
    if (with_oracle) {
      cmd->add_option("--oracle", oracle, "direct or voting-circuit")
          ->check(CLI::IsMember({"direct", "voting-circuit"}));
    }
    cmd->add_option("--ell", ell, "partition qubits");
    cmd->add_option("--t", t, "Grover iterations (power of two)");
    cmd->add_option("--epsilon", epsilon, "target error; picks ell and t when they are unset");
    cmd->add_option("--repeats", repeats, "median-of-repeats count for qae")->check(CLI::PositiveNumber);
  }

  EstimatorConfig config(std::uint64_t seed) const {
    EstimatorConfig c;
    c.method = parse_method(method);
    c.extraction = parse_extraction(extraction);
    c.oracle = oracle == "voting-circuit" ? OracleKind::voting_circuit : OracleKind::direct;
    c.ell = ell;
    c.t = t;
    c.epsilon = epsilon;
    c.seed = seed;
    c.repeats_for_median = repeats;
    if (!ell && !epsilon && c.method != Method::naive) c.ell = 6;
    return c;
  }
};

int cmd_quantum(const GlobalOptions& opt, const GameOptions& game_opt, const QuantumOptions& q) {
  const AnyGame g = game_opt.load();
  const EstimatorConfig cfg = q.config(opt.seed);
  const std::string label = method_label(cfg.method, cfg.extraction);
  std::vector<ResultRow> rows;
  for (unsigned i : game_opt.players(g.n_players())) {
    const ShapleyEstimate e = estimate_shapley(g, i, cfg);
    rows.push_back(make_row(g, e.ell, label, i, e.value, e.total_bound, opt.seed));
  }
  emit_rows(opt, rows);
  return 0;
}

int cmd_explain(const GlobalOptions& opt, const GameOptions& game_opt, const QuantumOptions& q) {
  const AnyGame loaded = game_opt.load();
  std::optional<LocalExplanationGame> g;
  if (const auto* le = loaded.target<LocalExplanationGame>()) {
    if (!q.anchor.empty()) throw ParseError("the game file already fixes the anchor");
    g = *le;
  } else {
    if (q.anchor.empty()) throw ParseError("explain needs --anchor or a local-explanation game file");
    g.emplace(loaded, Coalition::parse_binary(q.anchor, loaded.n_players()));
  }
  EstimatorConfig cfg = q.config(opt.seed);
  const std::string label = "local-" + method_label(cfg.method, cfg.extraction);
  std::vector<ResultRow> rows;
  const std::string scenario = "local-" + scenario_label(loaded);
  for (unsigned i : game_opt.players(g->n_players())) {
    const ShapleyEstimate e = estimate_local_explanation(*g, i, cfg);
    const double exact = exact_shapley(*g, i);
    rows.push_back({scenario, e.ell, label, i, e.value, exact, std::abs(e.value - exact), e.total_bound, opt.seed});
  }
  emit_rows(opt, rows);
  return 0;
}

struct SweepOptions {
  std::string spec;
  bool paper_scale = false;
  std::string summary;
};

int cmd_sweep(const GlobalOptions& opt, const SweepOptions& s) {
  ExperimentSpec spec = s.spec.empty() ? figure5_spec(s.paper_scale) : load_experiment_spec(s.spec);
  if (s.paper_scale) spec.games_per_condition = 64;
  if (opt.seed_given || s.spec.empty()) spec.seed = opt.seed;
  if (opt.threads != 0) spec.threads = opt.threads;
  const SweepResult r = run_error_sweep(spec);
  {
    Sink sink(opt.out);
    if (opt.format == "json") {
      sink.os() << sweep_to_json(r).dump(2) << '\n';
    } else {
      write_csv(sink.os(), r.rows);
    }
  }
  if (!s.summary.empty()) {
    Sink sink(s.summary);
    write_summary_csv(sink.os(), r.summary);
  }
  std::size_t violations = 0;
  for (const ConditionSummary& c : r.summary) violations += c.violations;
  std::cerr << "sweep: " << r.rows.size() << " estimates, " << violations << " bound violations, decay factor "
            << mean_decay_factor(r.summary) << '\n';
  return violations == 0 || spec.extraction == Extraction::qae ? 0 : 1;
}

int cmd_alice(const GlobalOptions& opt) {
  const AliceTrace t = run_alice_walkthrough();
  Sink sink(opt.out);
  if (opt.format == "json") {
    nlohmann::json stages = nlohmann::json::array();
    for (const WalkthroughStage& s : t.stages) {
      stages.push_back({{"side", to_string(s.side)},
                        {"stage", s.label},
                        {"ut_expectation", s.ut_expectation},
                        {"max_deviation", s.max_deviation},
                        {"matches", s.matches}});
    }
    sink.os() << nlohmann::json{{"schema_version", kSchemaVersion},
                                {"stages", stages},
                                {"plus_expectation", t.plus_expectation},
                                {"minus_expectation", t.minus_expectation},
                                {"estimate", t.estimate},
                                {"exact", t.exact},
                                {"bound", t.bound},
                                {"checks_pass", t.all_checks_pass}}
                     .dump(2)
              << '\n';
  } else {
    sink.os() << t.render();
  }
  return t.all_checks_pass ? 0 : 1;
}

int cmd_compare(const GlobalOptions& opt, CompareSpec spec) {
  spec.seed = opt.seed;
  const CompareResult r = compare_methods(spec);
  Sink sink(opt.out);
  if (opt.format == "json") {
    sink.os() << compare_to_json(r).dump(2) << '\n';
  } else {
    write_compare_csv(sink.os(), r);
  }
  std::cerr << "log-log slopes: mc-permutation " << r.mc_permutation_slope << ", mc-stratified "
            << r.mc_stratified_slope << ", qae " << r.qae_slope << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley values by classical enumeration, Monte Carlo and simulated quantum circuits"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opt;
  app.add_option("--seed", opt.seed, "base seed")->each([&](const std::string&) { opt.seed_given = true; });
  app.add_option("--out", opt.out, "output file (default stdout)");
  app.add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", opt.threads, "worker threads for sweeps (0 = all cores)");

  GameOptions game_opt;
  McOptions mc;
  QuantumOptions quantum;
  SweepOptions sweep;
  CompareSpec compare;

  auto* exact = app.add_subcommand("exact", "exact Shapley values by enumeration");
  game_opt.attach(exact);

  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimates");
  game_opt.attach(mc_cmd);
  mc_cmd->add_option("--samples", mc.samples, "samples per player")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--strategy", mc.strategy, "permutation or stratified")
      ->check(CLI::IsMember({"permutation", "stratified"}));

  auto* quantum_cmd = app.add_subcommand("quantum", "simulated quantum estimates");
  game_opt.attach(quantum_cmd);
  quantum.attach(quantum_cmd, true);

  auto* explain = app.add_subcommand("explain", "local explanation of one instance");
  game_opt.attach(explain);
  quantum.attach(explain, false);
  explain->add_option("--anchor", quantum.anchor, "instance bits, player 0 rightmost (e.g. 0b101)");

  auto* sweep_cmd = app.add_subcommand("sweep", "error sweep over voting scenarios and ell");
  sweep_cmd->add_option("--spec", sweep.spec, "experiment-spec JSON (default: the four voting scenarios)");
  sweep_cmd->add_flag("--paper-scale", sweep.paper_scale, "64 games per condition instead of 16");
  sweep_cmd->add_option("--summary", sweep.summary, "also write per-condition summary CSV here");

  auto* alice = app.add_subcommand("alice", "annotated three-voter trace at ell=2");

  auto* compare_cmd = app.add_subcommand("compare", "error versus value-oracle queries");
  compare_cmd->add_option("--players", compare.players, "players per game");
  compare_cmd->add_option("--quota", compare.quota, "voting quota");
  compare_cmd->add_option("--games", compare.games, "random games");
  compare_cmd->add_option("--ell", compare.ell, "partition qubits for the quantum pipeline");
  compare_cmd->add_option("--runs", compare.runs, "seeded runs per point");
  compare_cmd->add_option("--repeats", compare.repeats, "median-of-repeats count");
  compare_cmd->add_option("--t", compare.t_values, "Grover iteration counts")->delimiter(',');
  compare_cmd->add_option("--samples", compare.mc_samples, "Monte Carlo sample counts")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*exact) return cmd_exact(opt, game_opt);
    if (*mc_cmd) return cmd_mc(opt, game_opt, mc);
    if (*quantum_cmd) return cmd_quantum(opt, game_opt, quantum);
    if (*explain) return cmd_explain(opt, game_opt, quantum);
    if (*sweep_cmd) return cmd_sweep(opt, sweep);
    if (*alice) return cmd_alice(opt);
    if (*compare_cmd) return cmd_compare(opt, compare);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

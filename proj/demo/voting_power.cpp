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

// Voting power in a small weighted council: exact Shapley values next to
// the simulated quantum estimate and a Monte Carlo estimate.

#include <cstdio>

#include "qshap/qshap.hpp"

int main() {
  using namespace qshap;
  const WeightedVotingGame council({4, 3, 2, 1, 1}, 6);

  EstimatorConfig cfg;
  cfg.ell = 8;
  cfg.oracle = OracleKind::voting_circuit;

  std::printf("player weight   exact  quantum  bound    monte-carlo\n");
  for (unsigned i = 0; i < council.n_players(); ++i) {
    const double exact = exact_shapley(council, i);
    const ShapleyEstimate q = estimate_shapley(council, i, cfg);
    const McEstimate mc = mc_shapley(council, i, McConfig{2000, 7 + i});
    std::printf("%6u %6llu  %.4f  %.4f  %.1e  %.4f +- %.4f\n", i,
                static_cast<unsigned long long>(council.weights()[i]), exact, q.value, q.total_bound, mc.estimate,
                mc.std_error);
  }
  return 0;
}

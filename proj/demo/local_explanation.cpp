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

// Which input features drive a three-feature classifier's output on one
// instance. The classifier is given as a full truth table of scores.

#include <cstdio>

#include "qshap/qshap.hpp"

int main() {
  using namespace qshap;
  const ClassifierGame model(3, {0.0, 0.1, 0.2, 0.7, 0.3, 0.8, 0.9, 1.0});
  const LocalExplanationGame explain(AnyGame(model), Coalition::parse_binary("101", 3));

  EstimatorConfig cfg;
  cfg.ell = 6;
  std::printf("instance 101, score %.2f\n", model.value(explain.anchor()));
  std::printf("feature   exact  quantum  bound\n");
  for (unsigned i = 0; i < 3; ++i) {
    const ShapleyEstimate e = estimate_local_explanation(explain, i, cfg);
    std::printf("%7u  %.4f  %.4f  %.1e\n", i, exact_shapley(explain, i), e.value, e.total_bound);
  }
  return 0;
}

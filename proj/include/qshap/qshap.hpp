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

#include "qshap/bench.hpp"
#include "qshap/coalition.hpp"
#include "qshap/error_bounds.hpp"
#include "qshap/errors.hpp"
#include "qshap/exact.hpp"
#include "qshap/game.hpp"
#include "qshap/game_io.hpp"
#include "qshap/mc.hpp"
#include "qshap/qshapley.hpp"
#include "qshap/qsim/amplitude_estimation.hpp"
#include "qshap/qsim/circuit.hpp"
#include "qshap/qsim/primitives.hpp"
#include "qshap/qsim/state_vector.hpp"
#include "qshap/report.hpp"
#include "qshap/rng.hpp"
#include "qshap/summation.hpp"
#include "qshap/walkthrough.hpp"
#include "qshap/weights.hpp"

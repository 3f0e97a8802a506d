// Copyright 2026 The mintime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "mintime/cost_barrier.hpp"
#include "mintime/newton_solver.hpp"
#include "mintime/transverse_problem.hpp"

namespace mintime {

struct OuterRecord {
  int outer = 0;
  BarrierParams params;
  double cost = 0.0;
  double time = 0.0;  // maneuver time T of the outer iterate [s]
  double min_stage_margin = 0.0;
  double min_final_margin = 0.0;
  int newton_iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

struct ContinuationResult {
  Trajectory trajectory;
  std::vector<OuterRecord> outers;
  // Newton records tagged with their outer index, in execution order.
  std::vector<std::pair<int, IterationRecord>> iterations;
  bool success = false;
  std::string diagnostics;
};

// Outer barrier loop: repeatedly solves the fixed-barrier problem while
// shrinking the barrier parameters per the schedule. Stops early once the
// parameters hit their floors (a repeated solve would be a no-op). Stage
// failures return the best feasible iterate so far with diagnostics.
ContinuationResult continuation(TransverseProblem& problem, const Trajectory& traj0,
                                const Schedule& schedule, const NewtonOptions& opts = {});

}  // namespace mintime

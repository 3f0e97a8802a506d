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

#include "mintime/continuation.hpp"

#include "mintime/time_map.hpp"

namespace mintime {

ContinuationResult continuation(TransverseProblem& problem, const Trajectory& traj0,
                                const Schedule& schedule, const NewtonOptions& opts) {
  schedule.validate();
  ContinuationResult result;
  result.trajectory = traj0;

  BarrierParams prev;
  for (int outer = 0; outer < schedule.max_outer; ++outer) {
    BarrierParams params = schedule.at(outer);
    if (outer > 0 && params.eps == prev.eps && params.nu == prev.nu &&
        params.eps_f == prev.eps_f && params.nu_f == prev.nu_f) {
      break;  // floors reached; the subproblem would not change
    }
    prev = params;
    problem.set_barrier(params);

    FixedBarrierResult<TransverseProblem> stage;
    try {
      stage = solve_fixed_barrier(problem, result.trajectory, opts);
    } catch (const Error& e) {
      result.diagnostics = "outer " + std::to_string(outer) + " failed: " + e.what();
      return result;
    }
    result.trajectory = stage.trajectory;

    OuterRecord rec;
    rec.outer = outer;
    rec.params = params;
    rec.cost = stage.cost;
    rec.time = maneuver_time(result.trajectory, problem.path());
    rec.min_stage_margin = min_stage_margin_over(problem, result.trajectory, opts.exec);
    rec.min_final_margin = problem.min_final_margin(result.trajectory.x.back());
    rec.newton_iterations = static_cast<int>(stage.report.iterations.size());
    rec.converged = stage.report.converged;
    rec.stop_reason = stage.report.stop_reason;
    result.outers.push_back(rec);
    for (const auto& it : stage.report.iterations) result.iterations.emplace_back(outer, it);

    if (!stage.report.converged && stage.report.iterations.empty()) {
      result.diagnostics = "outer " + std::to_string(outer) +
                           " made no progress: " + stage.report.stop_reason;
      return result;
    }
  }
  result.success = true;
  return result;
}

}  // namespace mintime

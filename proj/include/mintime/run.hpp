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

#include <functional>
#include <string>

#include "mintime/continuation.hpp"
#include "mintime/scenario.hpp"
#include "mintime/time_map.hpp"
#include "mintime/transverse_problem.hpp"

namespace mintime {

TransverseProblem make_problem(const Scenario& scenario);

struct RunResult {
  Scenario scenario;
  InitialTrajectoryResult init;
  ContinuationResult continuation;
  TimeMap time_map;
  nlohmann::json summary;
};

// Full pipeline: frame path and constraints come with the scenario, the
// seed trajectory is built and projected, then the barrier continuation
// runs. `on_outer` (when set) observes each finished outer iteration.
RunResult run(const Scenario& scenario,
              const std::function<void(const OuterRecord&)>& on_outer = nullptr);

// Writes arclength.csv, time.csv, timemap.csv, bounds.csv, solver_log.jsonl,
// summary.json and config.json under out_dir (created if needed).
void write_artifacts(const RunResult& result, const std::string& out_dir);

// Per-figure CSV bundles (w1, w2, velocity, angles, rates, thrust, path3d,
// and radial for circular sections) derived from a run directory.
void write_plot_bundles(const std::string& run_dir);

// Streams a stored export (arclength.csv or time.csv) from a run directory.
std::string export_artifact(const std::string& run_dir, bool time_domain);

}  // namespace mintime

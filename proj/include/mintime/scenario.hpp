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

#include <memory>
#include <string>

#include <json.hpp>

#include "mintime/corridor.hpp"
#include "mintime/cost_barrier.hpp"
#include "mintime/flatness_init.hpp"
#include "mintime/frame_path.hpp"
#include "mintime/newton_solver.hpp"
#include "mintime/types.hpp"

namespace mintime {

/// Everything a solve needs, constructed and validated from a JSON config.
/// See README for the schema. File references (profiles, obstacle clouds)
/// are resolved relative to the config file.
struct Scenario {
  std::string name;
  nlohmann::json raw;  // parsed config, echoed into run artifacts

  std::shared_ptr<FramePath> path;  // shared: problems keep a pointer
  VehicleParams vehicle;
  InputStateBounds bounds;
  CorridorSpec corridor;
  FinalBox final_box;
  InitSpec init;
  StateVec x0 = StateVec::Zero();
  Schedule schedule;
  NewtonOptions newton;
  double export_dt = 2e-3;
};

Scenario load_scenario(const std::string& config_path);

// Parse-and-validate entry point used by `check`: throws ConfigError with a
// field path on any problem, returns a human-readable summary line on
// success.
std::string check_scenario(const std::string& config_path);

}  // namespace mintime

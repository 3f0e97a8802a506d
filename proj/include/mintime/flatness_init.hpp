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

#include <optional>

#include "mintime/discretization.hpp"
#include "mintime/transverse_problem.hpp"
#include "mintime/types.hpp"

namespace mintime {

/// Seed-trajectory recipe: constant-speed motion along the frame path with a
/// prescribed yaw. Optional boundary velocities bend the seed's velocity
/// direction within the (t, n) plane near the path ends so the seed starts
/// and finishes at states whose inertial velocity is off-tangent (used when
/// the final box pins a velocity that is not aligned with the end tangent).
struct InitSpec {
  double speed = 0.5;  // m/s along the curve
  double yaw = 0.0;    // rad, constant
  std::optional<Vec3> start_velocity;
  std::optional<Vec3> end_velocity;
  double blend_length = 1.5;  // m over which boundary velocities blend in
};

struct FlatOutputs {
  Vec3 pos = Vec3::Zero();
  Vec3 vel = Vec3::Zero();
  Vec3 acc = Vec3::Zero();
  Vec3 jerk = Vec3::Zero();
  double yaw = 0.0;
  double yaw_rate = 0.0;
};

// Attitude, thrust and body rates from the flat outputs of the translational
// dynamics. Throws when the required thrust vanishes (free fall) or the
// recovered pitch reaches the singularity margin.
std::pair<TimeState, InputU> flat_outputs_to_state_input(const FlatOutputs& flat,
                                                         const VehicleParams& params);

struct InitialTrajectoryResult {
  Trajectory trajectory;
  double min_stage_margin = 0.0;  // strict-interior margin, normalized units
  double min_final_margin = 0.0;
};

// Builds the seed curve from the flatness map (derivatives of the flat
// outputs by central differences on the grid), then projects it through the
// closed-loop integrator so the result satisfies the trajectory invariant.
// x0 overrides the curve's own initial state when given. Throws
// InfeasibleInitializationError naming the constraint and arc length when
// the projected seed is not strictly interior.
InitialTrajectoryResult initial_trajectory(const TransverseProblem& problem,
                                           const InitSpec& spec,
                                           std::optional<StateVec> x0 = std::nullopt);

// The seed curve itself (before projection); exposed for callers that want
// to project their own state-input curves instead.
Curve initial_curve(const FramePath& path, const InitSpec& spec, const VehicleParams& params);

}  // namespace mintime

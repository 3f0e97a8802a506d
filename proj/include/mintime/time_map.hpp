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

#include <vector>

#include "mintime/discretization.hpp"
#include "mintime/frame_path.hpp"
#include "mintime/types.hpp"

namespace mintime {

/// Monotone map between arc length and elapsed time along a trajectory,
/// t(s) = integral of the time density (trapezoid on the grid).
struct TimeMap {
  double ds = 0.0;
  std::vector<double> t;  // per node, t[0] = 0

  double total() const { return t.back(); }
  int num_nodes() const { return static_cast<int>(t.size()); }
  double time_at(double s) const;
  double arc_at(double time) const;
  void validate() const;  // strictly increasing, positive total
};

TimeMap build_time_map(const Trajectory& traj, const FramePath& path);

// Maneuver time = t(L); identical to the trapezoid integral of the running
// cost because it is the same integrand and quadrature.
double maneuver_time(const Trajectory& traj, const FramePath& path);

/// Uniform-in-time resampling of a trajectory (positions reconstructed from
/// the transverse coordinates).
struct TimeSample {
  double t = 0.0;
  double s = 0.0;
  StateVec x = StateVec::Zero();
  InputVec u = InputVec::Zero();
  Vec3 position = Vec3::Zero();
};

std::vector<TimeSample> to_time_domain(const Trajectory& traj, const TimeMap& tmap,
                                       const FramePath& path, double dt = 2e-3);

}  // namespace mintime

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

#include <array>
#include <string>
#include <vector>

#include "mintime/frame_path.hpp"
#include "mintime/types.hpp"

namespace mintime {

/// Scalar bound as a function of arc length, sampled on the path node grid.
struct BoundProfile {
  double ds = 0.0;
  std::vector<double> values;  // N+1 node samples

  double at(int i) const { return values[static_cast<size_t>(i)]; }
  double at_s(double s) const;
  int num_nodes() const { return static_cast<int>(values.size()); }

  static BoundProfile constant(int num_nodes, double ds, double value);
  static BoundProfile negated(const BoundProfile& other);
};

// Smooth transition hi -> lo centered at s_mid (logistic in (s-s_mid)/width).
BoundProfile sigmoid_bound(int num_nodes, double ds, double s_mid, double width,
                           double hi, double lo);
// hi -> lo -> hi with transitions at c1 and c2.
BoundProfile sigmoid_valley_bound(int num_nodes, double ds, double c1, double c2,
                                  double width, double hi, double lo);

/// Cross-section geometry of the admissible region around the frame path.
struct CorridorSpec {
  enum class Section { kCircular, kRectangular };
  Section section = Section::kCircular;

  BoundProfile r_obs;  // circular
  BoundProfile w1_min, w1_max, w2_min, w2_max;  // rectangular

  double min_clearance = 0.05;  // rectangular gap floor [m]

  int num_stage_constraints() const {
    return section == Section::kCircular ? 1 : 2;
  }
  // Largest |bound| anywhere; must stay below 0.95 / max-curvature.
  double max_bound_magnitude() const;
  // Throws on violated invariants (gap, positivity, uniqueness radius).
  void validate(double max_curvature) const;
};

struct InputStateBounds {
  double roll_rate_max = 1.0;   // rad/s
  double pitch_rate_max = 1.0;  // rad/s
  double yaw_rate_max = 1.0;    // rad/s
  double thrust_min = 0.1;      // N
  double thrust_max = 1.0;      // N
  BoundProfile roll_max, pitch_max, yaw_max;  // rad, arc-length dependent

  void validate() const;
};

/// Componentwise box for the transverse state at s = L.
struct FinalBox {
  StateVec lo = StateVec::Constant(-1.0);
  StateVec hi = StateVec::Constant(1.0);

  void validate() const;
  static FinalBox centered(const StateVec& center, const StateVec& tol);
};

// Normalized section constraints; <= 0 iff inside.
double eval_circular(double w1, double w2, double r_obs);
double eval_rect(double w, double w_min, double w_max);

// Fixed stage-constraint ordering:
//   0 roll rate, 1 pitch rate, 2 yaw rate, 3 roll, 4 pitch, 5 yaw, 6 thrust,
//   then the corridor constraint(s): circular radius, or w1 box + w2 box.
inline constexpr int kMaxStageConstraints = 9;

int stage_constraint_count(const CorridorSpec& corridor);
std::vector<std::string> stage_constraint_names(const CorridorSpec& corridor);

// Values only, in the fixed order; returns the count.
int eval_stage_constraints(const StateVec& x, const InputVec& u,
                           const InputStateBounds& bounds, const CorridorSpec& corridor,
                           int node, double* out);

// One stage constraint with first/second derivatives. All constraints in the
// stack are (sums of) squares of single variables, so gradients and Hessians
// are carried per involved variable; `var` indexes the stacked 12-vector
// (state then input).
struct StageConstraintDeriv {
  double value = 0.0;
  int nvars = 0;
  std::array<int, 2> var{{0, 0}};
  std::array<double, 2> grad{{0.0, 0.0}};
  std::array<double, 2> hess{{0.0, 0.0}};
};

int eval_stage_constraint_derivs(const StateVec& x, const InputVec& u,
                                 const InputStateBounds& bounds,
                                 const CorridorSpec& corridor, int node,
                                 StageConstraintDeriv* out);

// Final constraints c_f per state component; <= 0 iff inside the box.
StateVec eval_final_constraints(const StateVec& x_final, const FinalBox& box);
// value/grad/hess per component (each depends on its own component only).
void eval_final_constraint_derivs(const StateVec& x_final, const FinalBox& box,
                                  StateVec* value, StateVec* grad, StateVec* hess);

// Obstacle point mapped to (s, w1, w2) along the path.
struct ObstaclePointMap {
  double s = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
};
ObstaclePointMap map_obstacle_point(const FramePath& path, const Vec3& p_obs);

enum class BoundSide { kW1Min, kW1Max, kW2Min, kW2Max };

// Tightens one rectangular bound profile against an obstacle point cloud:
// each point is mapped to the path, inflated by `margin` toward the corridor
// interior, written to its nearest node, and the per-node update layer is
// widened by `window` nodes on each side before merging (a safe-side
// erosion of the free space, so re-applying the same cloud is a no-op).
// Throws InfeasibleCorridorError naming the arc interval if the corridor
// closes below min_clearance.
CorridorSpec restrict_bounds(const CorridorSpec& corridor,
                             const std::vector<Vec3>& obstacle_points,
                             const FramePath& path, BoundSide side,
                             double margin = 0.0, int window = 2);

}  // namespace mintime

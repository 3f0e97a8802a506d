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

#include "mintime/corridor.hpp"
#include "mintime/frame_path.hpp"
#include "mintime/types.hpp"

namespace mintime {

/// Relaxed-log-barrier weights. eps scales the stage barrier, eps_f the
/// terminal barrier; nu / nu_f are the switch points to the quadratic branch.
struct BarrierParams {
  double eps = 1.0;
  double nu = 1.0;
  double eps_f = 1.0;
  double nu_f = 1.0;

  void validate() const;
};

/// Geometric continuation: all four parameters are scaled by `factor` per
/// outer iteration, clamped at the floors.
struct Schedule {
  double factor = 0.2;
  double eps_floor = 1e-4;
  double nu_floor = 1e-4;
  int max_outer = 8;

  void validate() const;
  BarrierParams at(int outer) const;  // outer = 0 gives the initial params
};

// Relaxed logarithmic barrier: -log(x) for x > l, quadratic extension below.
// C2 at the junction, defined for all real x.
double beta(double x, double l);
double beta_d1(double x, double l);
double beta_d2(double x, double l);

// Time density (1 - k w1) / (t . v); its integral over [0, L] is the
// maneuver time.
double running_cost(const StateVec& x, const FrenetFrame& frame);

// running_cost + eps * sum_j beta_nu(-c_j).
double augmented_stage_cost(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                            const InputStateBounds& bounds, const CorridorSpec& corridor,
                            int node, const BarrierParams& params);

// eps_f * sum_i beta_nu_f(-c_f_i).
double terminal_cost(const StateVec& x_final, const FinalBox& box, const BarrierParams& params);

using ZVec = Eigen::Matrix<double, kStateDim + kInputDim, 1>;
using ZMat = Eigen::Matrix<double, kStateDim + kInputDim, kStateDim + kInputDim>;

enum class HessianMode {
  kExact,        // true second derivatives (time density may be indefinite)
  kGaussNewton,  // PSD: barrier curvature + eigenvalue-clamped time density
};

struct StageDerivs {
  double cost = 0.0;
  ZVec grad = ZVec::Zero();
  ZMat hess = ZMat::Zero();
};

StageDerivs stage_derivatives(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                              const InputStateBounds& bounds, const CorridorSpec& corridor,
                              int node, const BarrierParams& params,
                              HessianMode mode = HessianMode::kExact);

struct TerminalDerivs {
  double cost = 0.0;
  StateVec grad = StateVec::Zero();
  StateVec hess_diag = StateVec::Zero();  // componentwise separable
};

TerminalDerivs terminal_derivatives(const StateVec& x_final, const FinalBox& box,
                                    const BarrierParams& params);

}  // namespace mintime

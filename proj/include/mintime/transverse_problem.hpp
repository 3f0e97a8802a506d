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

#include <limits>

#include "mintime/corridor.hpp"
#include "mintime/cost_barrier.hpp"
#include "mintime/dynamics.hpp"
#include "mintime/errors.hpp"
#include "mintime/frame_path.hpp"
#include "mintime/types.hpp"

namespace mintime {

/// The minimum-time problem in transverse coordinates, packaged for the
/// projection-operator Newton solver: space-parameterized dynamics read
/// frames off the path's half-step grid, the stage cost is the barrier-
/// augmented time density, and the terminal cost is the final-box barrier.
/// All evaluation methods are pure and safe to call concurrently.
class TransverseProblem {
 public:
  static constexpr int kNX = kStateDim;
  static constexpr int kNU = kInputDim;
  using XVec = StateVec;
  using UVec = InputVec;

  TransverseProblem(const FramePath* path, const VehicleParams& vehicle,
                    const InputStateBounds& bounds, const CorridorSpec& corridor,
                    const FinalBox& final_box)
      : path_(path),
        vehicle_(vehicle),
        bounds_(bounds),
        corridor_(corridor),
        final_box_(final_box) {
    bounds_.validate();
    corridor_.validate(path_->max_curvature());
    final_box_.validate();
  }

  int num_nodes() const { return path_->num_nodes(); }
  double ds() const { return path_->ds(); }

  StateVec field(int half_index, const StateVec& x, const InputVec& u) const {
    return transverse_field(x, u, path_->frame_half(half_index), vehicle_);
  }

  void jacobians(int half_index, const StateVec& x, const InputVec& u, StateMat* A,
                 StateInputMat* B) const {
    linearize_transverse(x, u, path_->frame_half(half_index), vehicle_, A, B);
  }

  double stage_cost(int node, const StateVec& x, const InputVec& u) const {
    return augmented_stage_cost(x, u, path_->frame(node), bounds_, corridor_, node, barrier_);
  }

  void stage_derivs(int node, const StateVec& x, const InputVec& u, double* cost, ZVec* grad,
                    ZMat* hess_exact, ZMat* hess_psd) const {
    StageDerivs exact = stage_derivatives(x, u, path_->frame(node), bounds_, corridor_, node,
                                          barrier_, HessianMode::kExact);
    StageDerivs psd = stage_derivatives(x, u, path_->frame(node), bounds_, corridor_, node,
                                        barrier_, HessianMode::kGaussNewton);
    *cost = exact.cost;
    *grad = exact.grad;
    *hess_exact = exact.hess;
    *hess_psd = psd.hess;
  }

  double terminal_cost(const StateVec& x) const {
    return mintime::terminal_cost(x, final_box_, barrier_);
  }

  void terminal_derivs(const StateVec& x, StateVec* grad, StateMat* hess) const {
    TerminalDerivs d = terminal_derivatives(x, final_box_, barrier_);
    *grad = d.grad;
    *hess = d.hess_diag.asDiagonal();
  }

  bool state_in_domain(int half_index, const StateVec& x) const {
    return mintime::state_in_domain(x, path_->frame_half(half_index));
  }

  double min_stage_margin(int node, const StateVec& x, const InputVec& u) const {
    double c[kMaxStageConstraints];
    int n = eval_stage_constraints(x, u, bounds_, corridor_, node, c);
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) m = std::min(m, -c[j]);
    return m;
  }

  double min_final_margin(const StateVec& x) const {
    StateVec c = eval_final_constraints(x, final_box_);
    return -c.maxCoeff();
  }

  StateMat gain_state_weight() const { return gain_q_scale_ * StateMat::Identity(); }
  // Body rates are weighted per rad/s; thrust deviations are weighted in
  // acceleration units (F/m), which keeps the gain-design Riccati dynamics
  // resolvable on the grid for light vehicles.
  Eigen::Matrix<double, kNU, kNU> gain_input_weight() const {
    Eigen::Matrix<double, kNU, kNU> r =
        gain_r_scale_ * Eigen::Matrix<double, kNU, kNU>::Identity();
    r(kThrust, kThrust) = gain_r_scale_ / (vehicle_.mass * vehicle_.mass);
    return r;
  }
  StateMat gain_terminal_weight() const { return gain_state_weight(); }
  void set_gain_scales(double q_scale, double r_scale) {
    if (!(q_scale >= 0.0) || !(r_scale > 0.0)) {
      throw InvalidArgumentError("gain scales: q >= 0 and r > 0 required");
    }
    gain_q_scale_ = q_scale;
    gain_r_scale_ = r_scale;
  }

  void set_barrier(const BarrierParams& params) {
    params.validate();
    barrier_ = params;
  }
  const BarrierParams& barrier() const { return barrier_; }

  const FramePath& path() const { return *path_; }
  const VehicleParams& vehicle() const { return vehicle_; }
  const InputStateBounds& bounds() const { return bounds_; }
  const CorridorSpec& corridor() const { return corridor_; }
  const FinalBox& final_box() const { return final_box_; }

 private:
  const FramePath* path_;
  VehicleParams vehicle_;
  InputStateBounds bounds_;
  CorridorSpec corridor_;
  FinalBox final_box_;
  BarrierParams barrier_;
  double gain_q_scale_ = 1.0;
  double gain_r_scale_ = 1.0;
};

}  // namespace mintime

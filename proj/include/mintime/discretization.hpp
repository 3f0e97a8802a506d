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

#include "mintime/types.hpp"

namespace mintime {

// State-input samples on the uniform arc-length grid. Curve carries no
// feasibility promise; Trajectory additionally satisfies the grid dynamics
// (x[i+1] equals the RK4 step from x[i] under input u[i], held over the
// interval) to within roundoff. The projection operator produces
// trajectories; line-search trial points are curves.
template <int NX, int NU>
struct CurveT {
  using XVec = Eigen::Matrix<double, NX, 1>;
  using UVec = Eigen::Matrix<double, NU, 1>;

  double ds = 0.0;
  std::vector<XVec> x;
  std::vector<UVec> u;

  int num_nodes() const { return static_cast<int>(x.size()); }
  double length() const { return ds * (num_nodes() - 1); }

  bool all_finite() const {
    for (const auto& xi : x) {
      if (!xi.allFinite()) return false;
    }
    for (const auto& ui : u) {
      if (!ui.allFinite()) return false;
    }
    return true;
  }
};

template <int NX, int NU>
struct TrajectoryT {
  using XVec = Eigen::Matrix<double, NX, 1>;
  using UVec = Eigen::Matrix<double, NU, 1>;

  double ds = 0.0;
  std::vector<XVec> x;
  std::vector<UVec> u;

  int num_nodes() const { return static_cast<int>(x.size()); }
  double length() const { return ds * (num_nodes() - 1); }

  CurveT<NX, NU> as_curve() const { return CurveT<NX, NU>{ds, x, u}; }
};

using Trajectory = TrajectoryT<kStateDim, kInputDim>;
using Curve = CurveT<kStateDim, kInputDim>;

// One RK4 step of x' = f(s, x, u) over [s_i, s_i + ds] with the input held
// constant. The model evaluates the field at half-grid resolution: step i
// touches half-indices 2i, 2i+1, 2i+2.
template <class Model>
typename Model::XVec rk4_step(const Model& m, int node, const typename Model::XVec& x,
                              const typename Model::UVec& u, double h) {
  const int j = 2 * node;
  const auto k1 = m.field(j, x, u);
  const auto k2 = m.field(j + 1, (x + 0.5 * h * k1).eval(), u);
  const auto k3 = m.field(j + 1, (x + 0.5 * h * k2).eval(), u);
  const auto k4 = m.field(j + 2, (x + h * k3).eval(), u);
  return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Exact Jacobians of rk4_step w.r.t. x and u (chain rule through the
// stages), so the linearized grid dynamics are the true derivative of the
// nonlinear step map.
template <class Model>
void rk4_step_jacobians(const Model& m, int node, const typename Model::XVec& x,
                        const typename Model::UVec& u, double h,
                        Eigen::Matrix<double, Model::kNX, Model::kNX>* Ad,
                        Eigen::Matrix<double, Model::kNX, Model::kNU>* Bd) {
  constexpr int NX = Model::kNX;
  constexpr int NU = Model::kNU;
  using AMat = Eigen::Matrix<double, NX, NX>;
  using BMat = Eigen::Matrix<double, NX, NU>;
  const int j = 2 * node;

  const auto k1 = m.field(j, x, u);
  const auto x2 = (x + 0.5 * h * k1).eval();
  const auto k2 = m.field(j + 1, x2, u);
  const auto x3 = (x + 0.5 * h * k2).eval();
  const auto k3 = m.field(j + 1, x3, u);
  const auto x4 = (x + h * k3).eval();

  AMat a1, a2, a3, a4;
  BMat b1, b2, b3, b4;
  m.jacobians(j, x, u, &a1, &b1);
  m.jacobians(j + 1, x2, u, &a2, &b2);
  m.jacobians(j + 1, x3, u, &a3, &b3);
  m.jacobians(j + 2, x4, u, &a4, &b4);

  AMat dk1x = a1;
  BMat dk1u = b1;
  AMat dk2x = a2 * (AMat::Identity() + 0.5 * h * dk1x);
  BMat dk2u = a2 * (0.5 * h * dk1u) + b2;
  AMat dk3x = a3 * (AMat::Identity() + 0.5 * h * dk2x);
  BMat dk3u = a3 * (0.5 * h * dk2u) + b3;
  AMat dk4x = a4 * (AMat::Identity() + h * dk3x);
  BMat dk4u = a4 * (h * dk3u) + b4;

  *Ad = AMat::Identity() + h / 6.0 * (dk1x + 2.0 * dk2x + 2.0 * dk3x + dk4x);
  *Bd = h / 6.0 * (dk1u + 2.0 * dk2u + 2.0 * dk3u + dk4u);
}

// Worst per-step replay error, relative to the local state scale. A genuine
// trajectory sits at roundoff level; the invariant threshold is 1e-8.
template <class Model>
double trajectory_defect(const Model& m, const TrajectoryT<Model::kNX, Model::kNU>& traj) {
  double worst = 0.0;
  for (int i = 0; i + 1 < traj.num_nodes(); ++i) {
    const auto pred = rk4_step(m, i, traj.x[i], traj.u[i], traj.ds);
    const double err = (pred - traj.x[i + 1]).template lpNorm<Eigen::Infinity>();
    const double scale = 1.0 + traj.x[i].template lpNorm<Eigen::Infinity>();
    worst = std::max(worst, err / scale);
  }
  return worst;
}

}  // namespace mintime

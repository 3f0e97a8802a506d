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

#include <Eigen/Dense>

namespace mintime {

// Transverse state: [w1, w2, v1, v2, v3, phi, theta, psi].
inline constexpr int kStateDim = 8;
// Input: [p, q, r, F] (body rates + thrust).
inline constexpr int kInputDim = 4;

using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using InputVec = Eigen::Matrix<double, kInputDim, 1>;
using StateMat = Eigen::Matrix<double, kStateDim, kStateDim>;
using InputGainMat = Eigen::Matrix<double, kInputDim, kStateDim>;
using StateInputMat = Eigen::Matrix<double, kStateDim, kInputDim>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// State component indices.
enum StateIndex : int {
  kW1 = 0,
  kW2 = 1,
  kV1 = 2,
  kV2 = 3,
  kV3 = 4,
  kRoll = 5,
  kPitch = 6,
  kYaw = 7,
};

// Input component indices.
enum InputIndex : int {
  kRollRate = 0,
  kPitchRate = 1,
  kYawRate = 2,
  kThrust = 3,
};

struct VehicleParams {
  double mass = 0.0325;   // kg
  double gravity = 9.81;  // m/s^2
};

// Time-domain rigid-body state (position, velocity, roll-pitch-yaw).
struct TimeState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 phi = Vec3::Zero();
};

// Transverse state as named fields; the solver works on packed StateVec.
struct TransverseState {
  double w1 = 0.0;
  double w2 = 0.0;
  Vec3 v = Vec3::Zero();    // inertial velocity
  Vec3 phi = Vec3::Zero();  // roll, pitch, yaw

  StateVec to_vector() const {
    StateVec x;
    x << w1, w2, v.x(), v.y(), v.z(), phi.x(), phi.y(), phi.z();
    return x;
  }
  static TransverseState from_vector(const StateVec& x) {
    TransverseState s;
    s.w1 = x[kW1];
    s.w2 = x[kW2];
    s.v = x.segment<3>(kV1);
    s.phi = x.segment<3>(kRoll);
    return s;
  }
};

struct InputU {
  Vec3 omega = Vec3::Zero();  // body rates p, q, r
  double thrust = 0.0;        // N

  InputVec to_vector() const {
    InputVec u;
    u << omega.x(), omega.y(), omega.z(), thrust;
    return u;
  }
  static InputU from_vector(const InputVec& u) {
    InputU r;
    r.omega = u.head<3>();
    r.thrust = u[kThrust];
    return r;
  }
};

// Pitch values beyond pi/2 - kPitchMargin are treated as singular.
inline constexpr double kPitchMargin = 0.05;

}  // namespace mintime

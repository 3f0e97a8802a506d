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

#include "mintime/frame_path.hpp"
#include "mintime/types.hpp"

namespace mintime {

// Z-Y-X intrinsic (yaw-pitch-roll about current axes) rotation matrix,
// body to inertial.
Mat3 rotation_matrix(const Vec3& phi);

// Third column of rotation_matrix (thrust axis in inertial coordinates) and
// its derivative w.r.t. the Euler angles.
Vec3 rotation_e3(const Vec3& phi);
Mat3 rotation_e3_jacobian(const Vec3& phi);

// J(phi): maps body rates omega to Euler-angle rates. Throws
// PitchSingularityError within kPitchMargin of |theta| = pi/2.
Mat3 euler_rate_matrix(const Vec3& phi);

// Inverse map: omega = euler_rate_inverse(phi) * phi_dot.
Mat3 euler_rate_inverse(const Vec3& phi);

// d(J(phi) * omega)/dphi.
Mat3 euler_rate_product_jacobian(const Vec3& phi, const Vec3& omega);

// Time-domain vectored-thrust field:
//   p_dot = v,  v_dot = g e3 - (F/m) R(phi) e3,  phi_dot = J(phi) omega.
TimeState time_domain_field(const TimeState& x, const InputU& u, const VehicleParams& params);

// Inertial acceleration of the translational subsystem.
Vec3 translational_acceleration(const Vec3& phi, double thrust, const VehicleParams& params);

// Arc-length dilation dt/ds = (1 - k w1) / (t . v). Throws StateDomainError
// when the tangential velocity or the tube factor is non-positive.
double dilation(const StateVec& x, const FrenetFrame& frame, double s_for_error);

// Space-parameterized transverse dynamics (derivative w.r.t. arc length).
StateVec transverse_field(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                          const VehicleParams& params);

// Analytic Jacobians of transverse_field.
void linearize_transverse(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                          const VehicleParams& params, StateMat* A, StateInputMat* B);

// True when the state satisfies the transverse-domain invariants
// (tangential velocity, tube factor, pitch margin) with strict margin > 0.
bool state_in_domain(const StateVec& x, const FrenetFrame& frame);

}  // namespace mintime

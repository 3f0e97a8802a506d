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

#include "mintime/dynamics.hpp"

#include <cmath>

#include "mintime/errors.hpp"

namespace mintime {
namespace {

constexpr double kMinTangentialSpeed = 1e-9;

void check_pitch(double theta) {
  if (std::abs(theta) >= M_PI_2 - kPitchMargin) {
    throw PitchSingularityError("pitch " + std::to_string(theta) +
                                " rad within singularity margin");
  }
}

}  // namespace

Mat3 rotation_matrix(const Vec3& phi) {
  const double cr = std::cos(phi.x()), sr = std::sin(phi.x());
  const double cp = std::cos(phi.y()), sp = std::sin(phi.y());
  const double cy = std::cos(phi.z()), sy = std::sin(phi.z());
  Mat3 r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,  //
      sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,   //
      -sp, cp * sr, cp * cr;
  return r;
}

Vec3 rotation_e3(const Vec3& phi) {
  const double cr = std::cos(phi.x()), sr = std::sin(phi.x());
  const double cp = std::cos(phi.y()), sp = std::sin(phi.y());
  const double cy = std::cos(phi.z()), sy = std::sin(phi.z());
  return Vec3(cy * sp * cr + sy * sr, sy * sp * cr - cy * sr, cp * cr);
}

Mat3 rotation_e3_jacobian(const Vec3& phi) {
  const double cr = std::cos(phi.x()), sr = std::sin(phi.x());
  const double cp = std::cos(phi.y()), sp = std::sin(phi.y());
  const double cy = std::cos(phi.z()), sy = std::sin(phi.z());
  Mat3 j;
  // columns: d/droll, d/dpitch, d/dyaw
  j.col(0) = Vec3(-cy * sp * sr + sy * cr, -sy * sp * sr - cy * cr, -cp * sr);
  j.col(1) = Vec3(cy * cp * cr, sy * cp * cr, -sp * cr);
  j.col(2) = Vec3(-sy * sp * cr + cy * sr, cy * sp * cr + sy * sr, 0.0);
  return j;
}

Mat3 euler_rate_matrix(const Vec3& phi) {
  check_pitch(phi.y());
  const double cr = std::cos(phi.x()), sr = std::sin(phi.x());
  const double cp = std::cos(phi.y()), tp = std::tan(phi.y());
  Mat3 j;
  j << 1.0, sr * tp, cr * tp,  //
      0.0, cr, -sr,            //
      0.0, sr / cp, cr / cp;
  return j;
}

Mat3 euler_rate_inverse(const Vec3& phi) {
  const double cr = std::cos(phi.x()), sr = std::sin(phi.x());
  const double cp = std::cos(phi.y()), sp = std::sin(phi.y());
  Mat3 e;
  e << 1.0, 0.0, -sp,  //
      0.0, cr, sr * cp,  //
      0.0, -sr, cr * cp;
  return e;
}

Mat3 euler_rate_product_jacobian(const Vec3& phi, const Vec3& omega) {
  check_pitch(phi.y());
  const double cr = std::cos(phi.x()), sr = std::sin(phi.x());
  const double cp = std::cos(phi.y()), sp = std::sin(phi.y());
  const double tp = sp / cp;
  const double q = omega.y(), r = omega.z();
  const double u1 = q * sr + r * cr;
  const double u2 = q * cr - r * sr;  // du1/droll
  Mat3 j;
  j.col(0) = Vec3(tp * u2, -u1, u2 / cp);
  j.col(1) = Vec3(u1 / (cp * cp), 0.0, u1 * sp / (cp * cp));
  j.col(2) = Vec3::Zero();
  return j;
}

Vec3 translational_acceleration(const Vec3& phi, double thrust, const VehicleParams& params) {
  return params.gravity * Vec3::UnitZ() - (thrust / params.mass) * rotation_e3(phi);
}

TimeState time_domain_field(const TimeState& x, const InputU& u, const VehicleParams& params) {
  TimeState dx;
  dx.p = x.v;
  dx.v = translational_acceleration(x.phi, u.thrust, params);
  dx.phi = euler_rate_matrix(x.phi) * u.omega;
  return dx;
}

double dilation(const StateVec& x, const FrenetFrame& frame, double s_for_error) {
  const Vec3 v = x.segment<3>(kV1);
  const double sigma = frame.t.dot(v);
  const double mu = 1.0 - frame.k * x[kW1];
  if (sigma <= kMinTangentialSpeed) {
    throw StateDomainError("tangential velocity " + std::to_string(sigma) +
                               " not positive at s = " + std::to_string(s_for_error),
                           s_for_error);
  }
  if (mu <= 0.0) {
    throw StateDomainError("tube factor 1 - k*w1 = " + std::to_string(mu) +
                               " not positive at s = " + std::to_string(s_for_error),
                           s_for_error);
  }
  return mu / sigma;
}

StateVec transverse_field(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                          const VehicleParams& params) {
  const Vec3 v = x.segment<3>(kV1);
  const Vec3 phi = x.segment<3>(kRoll);
  const double eta = dilation(x, frame, -1.0);
  check_pitch(phi.y());

  const Vec3 acc = translational_acceleration(phi, u[kThrust], params);
  const Vec3 phidot = euler_rate_matrix(phi) * u.head<3>();

  StateVec dx;
  dx[kW1] = frame.n.dot(v) * eta + frame.tau * x[kW2];
  dx[kW2] = frame.b.dot(v) * eta - frame.tau * x[kW1];
  dx.segment<3>(kV1) = acc * eta;
  dx.segment<3>(kRoll) = phidot * eta;
  return dx;
}

void linearize_transverse(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                          const VehicleParams& params, StateMat* A, StateInputMat* B) {
  const Vec3 v = x.segment<3>(kV1);
  const Vec3 phi = x.segment<3>(kRoll);
  const double sigma = frame.t.dot(v);
  const double mu = 1.0 - frame.k * x[kW1];
  const double eta = dilation(x, frame, -1.0);
  check_pitch(phi.y());

  const Vec3 acc = translational_acceleration(phi, u[kThrust], params);
  const Mat3 jmat = euler_rate_matrix(phi);
  const Vec3 phidot = jmat * u.head<3>();
  const Vec3 re3 = rotation_e3(phi);

  // d(eta)/dw1, d(eta)/dv
  const double deta_dw1 = -frame.k / sigma;
  const Eigen::RowVector3d deta_dv = -(eta / sigma) * frame.t.transpose();

  A->setZero();
  B->setZero();

  const double nv = frame.n.dot(v);
  const double bv = frame.b.dot(v);

  // w1' = n.v * eta + tau * w2
  (*A)(kW1, kW1) = nv * deta_dw1;
  (*A)(kW1, kW2) = frame.tau;
  A->block<1, 3>(kW1, kV1) = eta * frame.n.transpose() + nv * deta_dv;

  // w2' = b.v * eta - tau * w1
  (*A)(kW2, kW1) = bv * deta_dw1 - frame.tau;
  A->block<1, 3>(kW2, kV1) = eta * frame.b.transpose() + bv * deta_dv;

  // v' = acc * eta
  A->block<3, 1>(kV1, kW1) = acc * deta_dw1;
  A->block<3, 3>(kV1, kV1) = acc * deta_dv;
  A->block<3, 3>(kV1, kRoll) = -(u[kThrust] / params.mass) * eta * rotation_e3_jacobian(phi);

  // phi' = J(phi) * omega * eta
  A->block<3, 1>(kRoll, kW1) = phidot * deta_dw1;
  A->block<3, 3>(kRoll, kV1) = phidot * deta_dv;
  A->block<3, 3>(kRoll, kRoll) = eta * euler_rate_product_jacobian(phi, u.head<3>());

  B->block<3, 3>(kRoll, kRollRate) = eta * jmat;
  B->block<3, 1>(kV1, kThrust) = -(eta / params.mass) * re3;
}

bool state_in_domain(const StateVec& x, const FrenetFrame& frame) {
  const Vec3 v = x.segment<3>(kV1);
  return frame.t.dot(v) > kMinTangentialSpeed && (1.0 - frame.k * x[kW1]) > 0.0 &&
         std::abs(x[kPitch]) < M_PI_2 - kPitchMargin && x.allFinite();
}

}  // namespace mintime

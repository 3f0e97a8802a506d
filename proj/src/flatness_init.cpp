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

#include "mintime/flatness_init.hpp"

#include <cmath>
#include <vector>

#include "mintime/dynamics.hpp"
#include "mintime/errors.hpp"
#include "mintime/newton_solver.hpp"

namespace mintime {
namespace {

Mat3 rot_z(double yaw) {
  Mat3 r;
  const double c = std::cos(yaw), s = std::sin(yaw);
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

// Signed angle of v from the tangent within the (t, n) plane.
double tangent_angle(const FrenetFrame& f, const Vec3& v) {
  if (std::abs(f.b.dot(v)) > 1e-9 * (1.0 + v.norm())) {
    throw InvalidArgumentError("boundary velocity must lie in the tangent-normal plane");
  }
  return std::atan2(f.n.dot(v), f.t.dot(v));
}

}  // namespace

std::pair<TimeState, InputU> flat_outputs_to_state_input(const FlatOutputs& flat,
                                                         const VehicleParams& params) {
  const Vec3 tvec = params.gravity * Vec3::UnitZ() - flat.acc;
  const double tn = tvec.norm();
  if (tn < 1e-9) {
    throw InvalidArgumentError("free-fall acceleration: thrust direction undefined");
  }
  const double thrust = params.mass * tn;
  const Vec3 zb = tvec / tn;

  // Attitude: solve R(phi) e3 = zb for roll/pitch given the yaw.
  const Vec3 zt = rot_z(flat.yaw).transpose() * zb;
  if (zt.z() <= 0.0) {
    throw PitchSingularityError("recovered attitude beyond 90 degrees of tilt");
  }
  const double roll = std::asin(std::clamp(-zt.y(), -1.0, 1.0));
  const double pitch = std::atan2(zt.x(), zt.z());
  if (std::abs(pitch) >= M_PI_2 - kPitchMargin) {
    throw PitchSingularityError("recovered pitch within singularity margin");
  }
  const Vec3 phi(roll, pitch, flat.yaw);

  // Rates: differentiate zb and the yaw.
  const Vec3 tdot = -flat.jerk;
  const Vec3 zbdot = (Mat3::Identity() - zb * zb.transpose()) * tdot / tn;
  const Vec3 ztdot =
      rot_z(flat.yaw).transpose() * zbdot - flat.yaw_rate * Vec3::UnitZ().cross(zt);
  const double cr = std::cos(roll);
  const double roll_dot = -ztdot.y() / cr;
  const double denom = zt.x() * zt.x() + zt.z() * zt.z();
  const double pitch_dot = (ztdot.x() * zt.z() - zt.x() * ztdot.z()) / denom;

  const Vec3 phi_dot(roll_dot, pitch_dot, flat.yaw_rate);
  const Vec3 omega = euler_rate_inverse(phi) * phi_dot;

  TimeState state;
  state.p = flat.pos;
  state.v = flat.vel;
  state.phi = phi;
  InputU input;
  input.omega = omega;
  input.thrust = thrust;
  return {state, input};
}

Curve initial_curve(const FramePath& path, const InitSpec& spec, const VehicleParams& params) {
  if (!(spec.speed > 0.0)) throw InvalidArgumentError("init speed must be positive");
  const int n = path.num_nodes();
  const double h = path.ds();
  const double len = path.length();

  // Velocity direction angle chi(s) relative to the tangent: zero along the
  // cruise, bent near the ends by a cubic whose integral vanishes, so the
  // transverse offset returns to zero exactly at the path ends.
  std::vector<double> tan_chi(n, 0.0);
  const double blend = std::min(spec.blend_length, 0.45 * len);
  if (spec.start_velocity) {
    double chi0 = tangent_angle(path.frame(0), *spec.start_velocity);
    double t0 = std::tan(chi0);
    for (int i = 0; i < n; ++i) {
      double s = i * h;
      if (s >= blend) break;
      double y = 1.0 - s / blend;
      tan_chi[i] += t0 * (3.0 * y * y - 2.0 * y);
    }
  }
  if (spec.end_velocity) {
    double chi1 = tangent_angle(path.frenet_at(len), *spec.end_velocity);
    double t1 = std::tan(chi1);
    for (int i = n - 1; i >= 0; --i) {
      double s = i * h;
      if (s <= len - blend) break;
      double y = (s - (len - blend)) / blend;
      tan_chi[i] += t1 * (3.0 * y * y - 2.0 * y);
    }
  }

  // Transverse offset from w1' = (1 - k w1) tan(chi) (RK2 on the grid).
  std::vector<double> w1(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    double k0 = path.frame(i).k;
    double k1 = path.frame(i + 1).k;
    double f0 = (1.0 - k0 * w1[i]) * tan_chi[i];
    double wmid = w1[i] + h * f0;
    double f1 = (1.0 - k1 * wmid) * tan_chi[i + 1];
    w1[i + 1] = w1[i] + 0.5 * h * (f0 + f1);
  }

  // Flat outputs per node; time derivatives via s-derivatives and s_dot.
  std::vector<Vec3> vel(n), pos(n);
  std::vector<double> sdot(n);
  for (int i = 0; i < n; ++i) {
    const FrenetFrame& f = path.frame(i);
    double chi = std::atan(tan_chi[i]);
    Vec3 dir = std::cos(chi) * f.t + std::sin(chi) * f.n;
    vel[i] = spec.speed * dir;
    pos[i] = path.point(i) + w1[i] * f.n;
    double mu = 1.0 - f.k * w1[i];
    sdot[i] = f.t.dot(vel[i]) / mu;
  }

  auto central = [&](const std::vector<Vec3>& arr, int i) -> Vec3 {
    if (i == 0) return (arr[1] - arr[0]) / h;
    if (i == n - 1) return (arr[n - 1] - arr[n - 2]) / h;
    return (arr[i + 1] - arr[i - 1]) / (2.0 * h);
  };

  std::vector<Vec3> acc(n);
  for (int i = 0; i < n; ++i) acc[i] = central(vel, i) * sdot[i];

  Curve curve;
  curve.ds = h;
  curve.x.resize(n);
  curve.u.resize(n);
  for (int i = 0; i < n; ++i) {
    FlatOutputs flat;
    flat.pos = pos[i];
    flat.vel = vel[i];
    flat.acc = acc[i];
    flat.jerk = central(acc, i) * sdot[i];
    flat.yaw = spec.yaw;
    flat.yaw_rate = 0.0;
    auto [state, input] = flat_outputs_to_state_input(flat, params);
    TransverseState xs;
    xs.w1 = w1[i];
    xs.w2 = 0.0;
    xs.v = state.v;
    xs.phi = state.phi;
    curve.x[i] = xs.to_vector();
    curve.u[i] = input.to_vector();
  }
  return curve;
}

InitialTrajectoryResult initial_trajectory(const TransverseProblem& problem,
                                           const InitSpec& spec, std::optional<StateVec> x0) {
  Curve curve = initial_curve(problem.path(), spec, problem.vehicle());

  // Gains for the seed projection are designed on the seed curve itself.
  Trajectory samples;
  samples.ds = curve.ds;
  samples.x = curve.x;
  samples.u = curve.u;
  NewtonOptions opts;
  GainScheduleT<TransverseProblem> gains = design_gain(problem, samples, opts);

  StateVec start = x0 ? *x0 : curve.x.front();
  InitialTrajectoryResult out;
  try {
    out.trajectory = project(problem, curve, gains, start);
  } catch (const ProjectionDivergedError& e) {
    throw InfeasibleInitializationError(std::string("seed projection failed: ") + e.what());
  }

  // Strict interiority, reported with the offending constraint.
  std::vector<double> margins;
  stage_margin_batch(problem, out.trajectory, opts.exec, &margins);
  out.min_stage_margin = std::numeric_limits<double>::infinity();
  int worst = 0;
  for (int i = 0; i < static_cast<int>(margins.size()); ++i) {
    if (margins[i] < out.min_stage_margin) {
      out.min_stage_margin = margins[i];
      worst = i;
    }
  }
  if (!(out.min_stage_margin > 0.0)) {
    double c[kMaxStageConstraints];
    int m = eval_stage_constraints(out.trajectory.x[worst], out.trajectory.u[worst],
                                   problem.bounds(), problem.corridor(), worst, c);
    auto names = stage_constraint_names(problem.corridor());
    int jworst = 0;
    for (int j = 1; j < m; ++j) {
      if (c[j] > c[jworst]) jworst = j;
    }
    throw InfeasibleInitializationError(
        "initial trajectory violates " + names[static_cast<size_t>(jworst)] + " at s = " +
        std::to_string(worst * curve.ds) + " (margin " +
        std::to_string(out.min_stage_margin) + ")");
  }
  out.min_final_margin = problem.min_final_margin(out.trajectory.x.back());
  if (!(out.min_final_margin > 0.0)) {
    throw InfeasibleInitializationError("initial trajectory ends outside the final box (margin " +
                                        std::to_string(out.min_final_margin) + ")");
  }
  return out;
}

}  // namespace mintime

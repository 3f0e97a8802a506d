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

// Times the per-node solver kernels with the serial reference against the
// OpenMP path on a representative tube scenario, and checks that both
// produce identical results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "mintime/flatness_init.hpp"
#include "mintime/kernels.hpp"
#include "mintime/newton_solver.hpp"
#include "mintime/transverse_problem.hpp"

using namespace mintime;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string& name, double serial_ms, double parallel_ms, double max_diff) {
  std::printf("%-22s %10.2f ms %10.2f ms %8.2fx   max |diff| = %.3g\n", name.c_str(),
              serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  const double length = argc > 1 ? std::stod(argv[1]) : 8.0;
  const int reps = argc > 2 ? std::stoi(argv[2]) : 5;

  CurvatureProfile k = CurvatureProfile::sigmoid_difference(0.8, 4.0, 0.3 * length, 0.6 * length);
  FramePath path = FramePath::build_planar(k, Vec3::UnitX(), Vec3::Zero(), -Vec3::UnitY(),
                                           length, 1e-3);
  const int n = path.num_nodes();

  VehicleParams vehicle;
  InputStateBounds bounds;
  bounds.roll_rate_max = 2.0;
  bounds.pitch_rate_max = 2.0;
  bounds.yaw_rate_max = 2.0;
  bounds.thrust_min = 0.05;
  bounds.thrust_max = 0.9;
  bounds.roll_max = BoundProfile::constant(n, path.ds(), 1.2);
  bounds.pitch_max = BoundProfile::constant(n, path.ds(), 1.2);
  bounds.yaw_max = BoundProfile::constant(n, path.ds(), 1.2);
  CorridorSpec corridor;
  corridor.section = CorridorSpec::Section::kCircular;
  corridor.r_obs = BoundProfile::constant(n, path.ds(), 0.8);
  FinalBox box;
  box.lo = StateVec::Constant(-5.0);
  box.hi = StateVec::Constant(5.0);
  TransverseProblem prob(&path, vehicle, bounds, corridor, box);

  InitSpec init;
  init.speed = 0.7;
  Trajectory traj = initial_trajectory(prob, init).trajectory;

  ExecPolicy serial{ExecMode::kSerial, 0};
  ExecPolicy parallel{ExecMode::kParallel, 0};
  std::printf("nodes = %d, threads = %d\n", n, parallel.effective_threads());
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    std::vector<StateMat> ad_s, ad_p;
    std::vector<StateInputMat> bd_s, bd_p;
    double ts = time_ms([&] { linearize_steps_batch(prob, traj, serial, &ad_s, &bd_s); }, reps);
    double tp = time_ms([&] { linearize_steps_batch(prob, traj, parallel, &ad_p, &bd_p); }, reps);
    double diff = 0.0;
    for (size_t i = 0; i < ad_s.size(); ++i) {
      diff = std::max(diff, (ad_s[i] - ad_p[i]).cwiseAbs().maxCoeff());
      diff = std::max(diff, (bd_s[i] - bd_p[i]).cwiseAbs().maxCoeff());
    }
    report("step jacobians", ts, tp, diff);
  }
  {
    std::vector<double> cs, cp;
    std::vector<ZVec> gs, gp;
    std::vector<ZMat> hes, hep, hps, hpp;
    double ts = time_ms([&] { stage_derivs_batch(prob, traj, serial, &cs, &gs, &hes, &hps); }, reps);
    double tp = time_ms([&] { stage_derivs_batch(prob, traj, parallel, &cp, &gp, &hep, &hpp); }, reps);
    double diff = 0.0;
    for (size_t i = 0; i < gs.size(); ++i) {
      diff = std::max(diff, std::abs(cs[i] - cp[i]));
      diff = std::max(diff, (gs[i] - gp[i]).cwiseAbs().maxCoeff());
      diff = std::max(diff, (hes[i] - hep[i]).cwiseAbs().maxCoeff());
      diff = std::max(diff, (hps[i] - hpp[i]).cwiseAbs().maxCoeff());
    }
    report("stage derivatives", ts, tp, diff);
  }
  {
    std::vector<double> ms, mp;
    double ts = time_ms([&] { stage_margin_batch(prob, traj, serial, &ms); }, reps);
    double tp = time_ms([&] { stage_margin_batch(prob, traj, parallel, &mp); }, reps);
    double diff = 0.0;
    for (size_t i = 0; i < ms.size(); ++i) diff = std::max(diff, std::abs(ms[i] - mp[i]));
    report("constraint margins", ts, tp, diff);
  }
  {
    std::vector<double> cs, cp;
    double ts = time_ms([&] { stage_cost_batch(prob, traj, serial, &cs); }, reps);
    double tp = time_ms([&] { stage_cost_batch(prob, traj, parallel, &cp); }, reps);
    double diff = 0.0;
    for (size_t i = 0; i < cs.size(); ++i) diff = std::max(diff, std::abs(cs[i] - cp[i]));
    report("stage cost", ts, tp, diff);
  }
  {
    std::vector<StateVec> lambda(n - 1, StateVec::Constant(0.1));
    std::vector<ZMat> cu_s, cu_p;
    double ts = time_ms([&] { field_curvature_batch(prob, traj, lambda, serial, &cu_s); }, reps);
    double tp = time_ms([&] { field_curvature_batch(prob, traj, lambda, parallel, &cu_p); }, reps);
    double diff = 0.0;
    for (size_t i = 0; i < cu_s.size(); ++i) {
      diff = std::max(diff, (cu_s[i] - cu_p[i]).cwiseAbs().maxCoeff());
    }
    report("field curvature", ts, tp, diff);
  }
  return 0;
}

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

#include "mintime/time_map.hpp"

#include <algorithm>
#include <cmath>

#include "mintime/cost_barrier.hpp"
#include "mintime/errors.hpp"

namespace mintime {

double TimeMap::time_at(double s) const {
  const int n = num_nodes();
  double x = s / ds;
  int i = std::clamp(static_cast<int>(std::floor(x)), 0, n - 2);
  double u = x - i;
  return (1.0 - u) * t[i] + u * t[i + 1];
}

double TimeMap::arc_at(double time) const {
  const int n = num_nodes();
  if (time <= 0.0) return 0.0;
  if (time >= t[n - 1]) return ds * (n - 1);
  // t is strictly increasing; invert the linear segment.
  int lo = static_cast<int>(std::upper_bound(t.begin(), t.end(), time) - t.begin()) - 1;
  lo = std::clamp(lo, 0, n - 2);
  double u = (time - t[lo]) / (t[lo + 1] - t[lo]);
  return ds * (lo + u);
}

void TimeMap::validate() const {
  if (t.size() < 2) throw InvalidArgumentError("time map needs at least two nodes");
  for (size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw InvalidArgumentError("time map not strictly increasing at node " +
                                 std::to_string(i));
    }
  }
  if (!(total() > 0.0)) throw InvalidArgumentError("non-positive total time");
}

TimeMap build_time_map(const Trajectory& traj, const FramePath& path) {
  const int n = traj.num_nodes();
  TimeMap map;
  map.ds = traj.ds;
  map.t.resize(n);
  map.t[0] = 0.0;
  double prev = running_cost(traj.x[0], path.frame(0));
  for (int i = 1; i < n; ++i) {
    double cur = running_cost(traj.x[i], path.frame(i));
    map.t[i] = map.t[i - 1] + 0.5 * traj.ds * (prev + cur);
    prev = cur;
  }
  map.validate();
  return map;
}

double maneuver_time(const Trajectory& traj, const FramePath& path) {
  return build_time_map(traj, path).total();
}

std::vector<TimeSample> to_time_domain(const Trajectory& traj, const TimeMap& tmap,
                                       const FramePath& path, double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("dt must be positive");
  const double total = tmap.total();
  const int n = traj.num_nodes();
  std::vector<TimeSample> out;
  int steps = static_cast<int>(std::floor(total / dt));
  out.reserve(static_cast<size_t>(steps) + 2);

  auto interp_state = [&](double s) {
    double x = s / traj.ds;
    int i = std::clamp(static_cast<int>(std::floor(x)), 0, n - 2);
    double u = x - i;
    TimeSample smp;
    smp.s = s;
    smp.x = (1.0 - u) * traj.x[i] + u * traj.x[i + 1];
    smp.u = (1.0 - u) * traj.u[i] + u * traj.u[i + 1];
    smp.position = path.reconstruct_position(s, smp.x[kW1], smp.x[kW2]);
    return smp;
  };

  for (int k = 0;; ++k) {
    double time = k * dt;
    bool last = time >= total;
    TimeSample smp = interp_state(tmap.arc_at(last ? total : time));
    smp.t = last ? total : time;
    out.push_back(smp);
    if (last) break;
  }
  return out;
}

}  // namespace mintime

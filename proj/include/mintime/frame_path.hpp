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

#include <optional>
#include <vector>

#include "mintime/curvature_profile.hpp"
#include "mintime/types.hpp"

namespace mintime {

/// Orthonormal moving frame of the path at one arc length.
struct FrenetFrame {
  Vec3 t = Vec3::UnitX();
  Vec3 n = Vec3::UnitY();
  Vec3 b = Vec3::UnitZ();
  double k = 0.0;    // curvature [1/m]
  double tau = 0.0;  // torsion [1/m]

  // Columns [t n b]: maps frame components to inertial components.
  Mat3 rotation() const {
    Mat3 r;
    r.col(0) = t;
    r.col(1) = n;
    r.col(2) = b;
    return r;
  }
};

/// Arc-length parameterized reference curve with moving frames, sampled on a
/// uniform grid (internally at half the grid step so integrators can read
/// frames at interval midpoints). Immutable after construction.
///
/// Between stored samples the curve is evaluated by propagating the frame
/// ODE from the nearest lower sample with a single RK4 step, which keeps
/// sub-grid evaluation consistent with the construction integrator.
class FramePath {
 public:
  struct Sample {
    Vec3 p;
    FrenetFrame frame;
  };

  // Planar construction: fixed binormal, heading angle integrated from the
  // (signed) curvature profile. Torsion is identically zero.
  static FramePath build_planar(const CurvatureProfile& curvature, const Vec3& binormal,
                                const Vec3& p0, const Vec3& t0, double length, double ds);

  // General construction from curvature + torsion: integrates the frame ODE
  //   p' = t,  R' = R * skew(k, tau)
  // with RK4 at half the grid step. n0 fixes the initial normal.
  static FramePath build_spatial(const CurvatureProfile& curvature,
                                 const TorsionProfile& torsion, const Vec3& p0,
                                 const Vec3& t0, const Vec3& n0, double length, double ds);

  double ds() const { return ds_; }
  double length() const { return length_; }
  int num_nodes() const { return num_nodes_; }  // N+1 on the ds grid

  const Vec3& point(int i) const { return points_[2 * i]; }
  const FrenetFrame& frame(int i) const { return frames_[2 * i]; }
  // Half-grid accessors, j in [0, 2N].
  const Vec3& point_half(int j) const { return points_[j]; }
  const FrenetFrame& frame_half(int j) const { return frames_[j]; }

  Sample sample_at(double s) const;
  FrenetFrame frenet_at(double s) const { return sample_at(s).frame; }
  Vec3 position_at(double s) const { return sample_at(s).p; }

  // Arc length of the closest point on the path. Without a hint the whole
  // grid is scanned; with a hint the scan is restricted to a local window
  // (hint_window meters on each side). Throws AmbiguousProjectionError when
  // two separated minima tie, OutOfTubeError beyond the capture radius.
  double project_point(const Vec3& p, std::optional<double> s_hint = std::nullopt,
                       double hint_window = 0.5) const;

  // (w1, w2) components of p - p_f(s_f) in the frame at s_f. Requires s_f to
  // be the orthogonal projection of p.
  std::pair<double, double> transverse_coords(double s_f, const Vec3& p) const;

  Vec3 reconstruct_position(double s, double w1, double w2) const;

  double max_curvature() const { return max_curvature_; }
  // Uniqueness radius of the projection, 1/max|k| (infinite when straight).
  double capture_radius() const;

  // Invariant diagnostics (node grid, central differences).
  double max_arclength_deviation() const;
  double max_frenet_residual() const;
  // Throws InvalidArgumentError when two nodes more than 2*radius apart in
  // arc length come closer than radius in space.
  void check_local_clearance(double radius) const;

 private:
  FramePath() = default;
  void finalize();

  double ds_ = 0.0;
  double half_ = 0.0;
  double length_ = 0.0;
  int num_nodes_ = 0;
  bool planar_ = false;
  Vec3 plane_u_ = Vec3::UnitX();  // heading basis in the plane
  Vec3 plane_w_ = Vec3::UnitY();
  Vec3 binormal_ = Vec3::UnitZ();
  CurvatureProfile curvature_;
  TorsionProfile torsion_;
  std::vector<Vec3> points_;          // 2N+1 samples
  std::vector<FrenetFrame> frames_;   // 2N+1 samples
  std::vector<double> heading_;       // planar only
  double max_curvature_ = 0.0;
};

}  // namespace mintime

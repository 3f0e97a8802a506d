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

#include "mintime/frame_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mintime/errors.hpp"

namespace mintime {
namespace {

Mat3 frenet_skew(double k, double tau) {
  Mat3 w;
  w << 0.0, -k, 0.0,  //
      k, 0.0, -tau,   //
      0.0, tau, 0.0;
  return w;
}

Mat3 orthonormalized(const Mat3& r) {
  Vec3 t = r.col(0).normalized();
  Vec3 n = (r.col(1) - t * t.dot(r.col(1))).normalized();
  Vec3 b = t.cross(n);
  Mat3 out;
  out.col(0) = t;
  out.col(1) = n;
  out.col(2) = b;
  return out;
}

// One RK4 step of the planar heading/position system
//   theta' = k(s),  p' = cos(theta) u + sin(theta) w.
void planar_rk4(const CurvatureProfile& k, const Vec3& u, const Vec3& w, double s,
                double h, double* theta, Vec3* p) {
  auto tangent = [&](double th) { return Vec3(std::cos(th) * u + std::sin(th) * w); };
  double k1 = k(s);
  Vec3 q1 = tangent(*theta);
  double k2 = k(s + 0.5 * h);
  Vec3 q2 = tangent(*theta + 0.5 * h * k1);
  double k3 = k2;
  Vec3 q3 = tangent(*theta + 0.5 * h * k2);
  double k4 = k(s + h);
  Vec3 q4 = tangent(*theta + h * k3);
  *theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  *p += h / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
}

// One RK4 step of p' = R e1, R' = R skew(k, tau).
void spatial_rk4(const CurvatureProfile& k, const TorsionProfile& tau, double s, double h,
                 Vec3* p, Mat3* r) {
  auto deriv = [&](double si, const Mat3& ri, Mat3* dr, Vec3* dp) {
    *dr = ri * frenet_skew(k(si), tau(si));
    *dp = ri.col(0);
  };
  Mat3 dr1, dr2, dr3, dr4;
  Vec3 dp1, dp2, dp3, dp4;
  deriv(s, *r, &dr1, &dp1);
  deriv(s + 0.5 * h, *r + 0.5 * h * dr1, &dr2, &dp2);
  deriv(s + 0.5 * h, *r + 0.5 * h * dr2, &dr3, &dp3);
  deriv(s + h, *r + h * dr3, &dr4, &dp4);
  *r += h / 6.0 * (dr1 + 2.0 * dr2 + 2.0 * dr3 + dr4);
  *p += h / 6.0 * (dp1 + 2.0 * dp2 + 2.0 * dp3 + dp4);
}

}  // namespace

FramePath FramePath::build_planar(const CurvatureProfile& curvature, const Vec3& binormal,
                                  const Vec3& p0, const Vec3& t0, double length, double ds) {
  if (length <= 0.0 || ds <= 0.0) throw InvalidArgumentError("path length and ds must be positive");
  Vec3 b = binormal;
  Vec3 t = t0;
  if (b.norm() < 1e-12 || t.norm() < 1e-12) throw InvalidArgumentError("binormal/t0 must be nonzero");
  b.normalize();
  t.normalize();
  if (std::abs(b.dot(t)) > 1e-9) {
    throw InvalidArgumentError("t0 must be orthogonal to the binormal");
  }
  if (curvature.domain_length() < length - 1e-9) {
    throw InvalidArgumentError("curvature profile domain shorter than path length");
  }

  FramePath path;
  path.ds_ = ds;
  path.half_ = 0.5 * ds;
  path.num_nodes_ = static_cast<int>(std::llround(length / ds)) + 1;
  path.length_ = (path.num_nodes_ - 1) * ds;
  path.planar_ = true;
  path.binormal_ = b;
  path.plane_u_ = t;
  path.plane_w_ = b.cross(t);
  path.curvature_ = curvature;
  path.torsion_ = TorsionProfile::zero();

  const int m = 2 * (path.num_nodes_ - 1) + 1;
  path.points_.resize(m);
  path.frames_.resize(m);
  path.heading_.resize(m);

  double theta = 0.0;
  Vec3 p = p0;
  for (int j = 0; j < m; ++j) {
    double s = j * path.half_;
    path.heading_[j] = theta;
    path.points_[j] = p;
    FrenetFrame f;
    f.t = std::cos(theta) * path.plane_u_ + std::sin(theta) * path.plane_w_;
    f.b = b;
    f.n = b.cross(f.t);
    f.k = curvature(s);
    f.tau = 0.0;
    path.frames_[j] = f;
    if (j + 1 < m) planar_rk4(curvature, path.plane_u_, path.plane_w_, s, path.half_, &theta, &p);
  }
  path.finalize();
  return path;
}

FramePath FramePath::build_spatial(const CurvatureProfile& curvature,
                                   const TorsionProfile& torsion, const Vec3& p0,
                                   const Vec3& t0, const Vec3& n0, double length, double ds) {
  if (length <= 0.0 || ds <= 0.0) throw InvalidArgumentError("path length and ds must be positive");
  Vec3 t = t0.normalized();
  Vec3 n = (n0 - t * t.dot(n0)).normalized();
  if (curvature.domain_length() < length - 1e-9 || torsion.domain_length() < length - 1e-9) {
    throw InvalidArgumentError("profile domain shorter than path length");
  }

  FramePath path;
  path.ds_ = ds;
  path.half_ = 0.5 * ds;
  path.num_nodes_ = static_cast<int>(std::llround(length / ds)) + 1;
  path.length_ = (path.num_nodes_ - 1) * ds;
  path.planar_ = false;
  path.curvature_ = curvature;
  path.torsion_ = torsion;

  const int m = 2 * (path.num_nodes_ - 1) + 1;
  path.points_.resize(m);
  path.frames_.resize(m);

  Mat3 r;
  r.col(0) = t;
  r.col(1) = n;
  r.col(2) = t.cross(n);
  Vec3 p = p0;
  for (int j = 0; j < m; ++j) {
    double s = j * path.half_;
    r = orthonormalized(r);
    path.points_[j] = p;
    FrenetFrame f;
    f.t = r.col(0);
    f.n = r.col(1);
    f.b = r.col(2);
    f.k = curvature(s);
    f.tau = torsion(s);
    path.frames_[j] = f;
    if (j + 1 < m) spatial_rk4(curvature, torsion, s, path.half_, &p, &r);
  }
  path.finalize();
  return path;
}

void FramePath::finalize() {
  double mk = 0.0;
  for (const auto& f : frames_) mk = std::max(mk, std::abs(f.k));
  max_curvature_ = mk;
}

FramePath::Sample FramePath::sample_at(double s) const {
  if (s < -1e-9 || s > length_ + 1e-9) {
    throw InvalidArgumentError("arc length outside [0, L]");
  }
  s = std::clamp(s, 0.0, length_);
  int j = std::min(static_cast<int>(std::floor(s / half_)),
                   static_cast<int>(points_.size()) - 2);
  double s0 = j * half_;
  double delta = s - s0;
  Sample out;
  if (delta < 1e-13) {
    out.p = points_[j];
    out.frame = frames_[j];
    return out;
  }
  if (planar_) {
    double theta = heading_[j];
    Vec3 p = points_[j];
    planar_rk4(curvature_, plane_u_, plane_w_, s0, delta, &theta, &p);
    out.p = p;
    out.frame.t = std::cos(theta) * plane_u_ + std::sin(theta) * plane_w_;
    out.frame.b = binormal_;
    out.frame.n = binormal_.cross(out.frame.t);
    out.frame.k = curvature_(s);
    out.frame.tau = 0.0;
  } else {
    Mat3 r = frames_[j].rotation();
    Vec3 p = points_[j];
    spatial_rk4(curvature_, torsion_, s0, delta, &p, &r);
    r = orthonormalized(r);
    out.p = p;
    out.frame.t = r.col(0);
    out.frame.n = r.col(1);
    out.frame.b = r.col(2);
    out.frame.k = curvature_(s);
    out.frame.tau = torsion_(s);
  }
  return out;
}

double FramePath::capture_radius() const {
  return max_curvature_ > 1e-12 ? 1.0 / max_curvature_
                                : std::numeric_limits<double>::infinity();
}

double FramePath::project_point(const Vec3& p, std::optional<double> s_hint,
                                double hint_window) const {
  const int n = num_nodes_;
  int i_lo = 0, i_hi = n - 1;
  if (s_hint) {
    double lo = std::clamp(*s_hint - hint_window, 0.0, length_);
    double hi = std::clamp(*s_hint + hint_window, 0.0, length_);
    i_lo = static_cast<int>(std::floor(lo / ds_));
    i_hi = std::min(n - 1, static_cast<int>(std::ceil(hi / ds_)));
  }

  int best = i_lo;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = i_lo; i <= i_hi; ++i) {
    double d2 = (p - point(i)).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }

  // Ambiguity: a second local minimum of comparable distance far from the
  // best one means the projection is not unique.
  if (!s_hint) {
    double best_d = std::sqrt(best_d2);
    double sep = std::max(10.0 * ds_, 0.5 * std::min(capture_radius(), length_));
    for (int i = i_lo + 1; i < i_hi; ++i) {
      double d2m = (p - point(i - 1)).squaredNorm();
      double d2c = (p - point(i)).squaredNorm();
      double d2p = (p - point(i + 1)).squaredNorm();
      if (d2c <= d2m && d2c <= d2p && std::abs(i - best) * ds_ > sep) {
        double dc = std::sqrt(d2c);
        if (std::abs(dc - best_d) <= 1e-6 * (1.0 + best_d)) {
          throw AmbiguousProjectionError("projection has two equally close minima at s = " +
                                         std::to_string(best * ds_) + " and s = " +
                                         std::to_string(i * ds_));
        }
      }
    }
  }

  // Newton refinement of t(s) . (p - p_f(s)) = 0.
  double s = best * ds_;
  double lo = std::max(0.0, s - 2.0 * ds_);
  double hi = std::min(length_, s + 2.0 * ds_);
  for (int it = 0; it < 12; ++it) {
    Sample smp = sample_at(s);
    Vec3 d = p - smp.p;
    double phi = smp.frame.t.dot(d);
    double dphi = smp.frame.k * smp.frame.n.dot(d) - 1.0;
    if (std::abs(phi) < 1e-12 * (1.0 + d.norm())) break;
    double step = (std::abs(dphi) > 1e-12) ? -phi / dphi : phi;
    s = std::clamp(s + step, lo, hi);
    if (s == lo || s == hi) {
      if (lo == 0.0 || hi == length_) break;  // clamped at a path end
    }
  }

  double dist = (p - sample_at(s).p).norm();
  if (dist >= capture_radius()) {
    throw OutOfTubeError("point at distance " + std::to_string(dist) +
                         " beyond capture radius " + std::to_string(capture_radius()));
  }
  return s;
}

std::pair<double, double> FramePath::transverse_coords(double s_f, const Vec3& p) const {
  Sample smp = sample_at(s_f);
  Vec3 d = p - smp.p;
  double tangential = smp.frame.t.dot(d);
  bool at_end = s_f <= 1e-12 || s_f >= length_ - 1e-12;
  if (!at_end && std::abs(tangential) > 1e-8 * (1.0 + d.norm())) {
    throw InvalidArgumentError("inconsistent (s_f, p) pair: tangential component " +
                               std::to_string(tangential));
  }
  return {smp.frame.n.dot(d), smp.frame.b.dot(d)};
}

Vec3 FramePath::reconstruct_position(double s, double w1, double w2) const {
  Sample smp = sample_at(s);
  return smp.p + w1 * smp.frame.n + w2 * smp.frame.b;
}

double FramePath::max_arclength_deviation() const {
  double worst = 0.0;
  for (int i = 1; i + 1 < num_nodes_; ++i) {
    double speed = (point(i + 1) - point(i - 1)).norm() / (2.0 * ds_);
    worst = std::max(worst, std::abs(speed - 1.0));
  }
  return worst;
}

double FramePath::max_frenet_residual() const {
  double worst = 0.0;
  for (int i = 1; i + 1 < num_nodes_; ++i) {
    Mat3 dr = (frame(i + 1).rotation() - frame(i - 1).rotation()) / (2.0 * ds_);
    Mat3 res = dr - frame(i).rotation() * frenet_skew(frame(i).k, frame(i).tau);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

void FramePath::check_local_clearance(double radius) const {
  if (radius <= 0.0) return;
  // Hash nodes into cells of size `radius`, then compare each node against
  // nodes in neighboring cells outside its own arc-length window.
  auto key = [&](const Vec3& p) {
    auto q = [&](double x) { return static_cast<long long>(std::floor(x / radius)); };
    return std::tuple<long long, long long, long long>(q(p.x()), q(p.y()), q(p.z()));
  };
  struct TupleHash {
    size_t operator()(const std::tuple<long long, long long, long long>& t) const {
      auto h = std::hash<long long>();
      size_t a = h(std::get<0>(t)), b = h(std::get<1>(t)), c = h(std::get<2>(t));
      return a ^ (b * 0x9e3779b97f4a7c15ull) ^ (c * 0xc2b2ae3d27d4eb4full);
    }
  };
  std::unordered_map<std::tuple<long long, long long, long long>, std::vector<int>, TupleHash>
      cells;
  for (int i = 0; i < num_nodes_; ++i) cells[key(point(i))].push_back(i);

  const double window = 2.0 * radius;
  for (int i = 0; i < num_nodes_; ++i) {
    auto [cx, cy, cz] = key(point(i));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = cells.find({cx + dx, cy + dy, cz + dz});
          if (it == cells.end()) continue;
          for (int j : it->second) {
            if (std::abs(i - j) * ds_ <= window) continue;
            if ((point(i) - point(j)).norm() < radius) {
              throw InvalidArgumentError(
                  "path self-intersects within clearance radius near s = " +
                  std::to_string(i * ds_) + " and s = " + std::to_string(j * ds_));
            }
          }
        }
      }
    }
  }
}

}  // namespace mintime

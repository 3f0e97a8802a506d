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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "mintime/errors.hpp"
#include "mintime/frame_path.hpp"

using namespace mintime;

namespace {

FramePath straight_path(double length = 10.0, double ds = 1e-3) {
  return FramePath::build_planar(CurvatureProfile::zero(), Vec3::UnitZ(), Vec3::Zero(),
                                 Vec3::UnitX(), length, ds);
}

FramePath circle_path(double radius, double length, double ds = 1e-3) {
  return FramePath::build_planar(CurvatureProfile::constant(1.0 / radius), Vec3::UnitZ(),
                                 Vec3::Zero(), Vec3::UnitX(), length, ds);
}

// Curvature profile of the room scenario: a quarter turn of radius 5.
CurvatureProfile rooms_profile() {
  return CurvatureProfile::tanh_difference(0.2, 1.0, 5.0, 5.0 * (1.0 + M_PI_2));
}

// Curvature profile of the tube scenario: unit-curvature bend.
CurvatureProfile tube_profile() {
  return CurvatureProfile::sigmoid_difference(1.0, 8.0, 2.27, 3.67);
}

// Exhaustive node-grid minimization, the reference for project_point.
double brute_force_projection(const FramePath& path, const Vec3& p) {
  double best = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < path.num_nodes(); ++i) {
    double d = (p - path.point(i)).norm();
    if (d < best_d) {
      best_d = d;
      best = i * path.ds();
    }
  }
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("frame_path");

TEST_CASE("straight line has constant frames and trivial geometry") {
  FramePath path = straight_path();
  CHECK(path.num_nodes() == 10001);
  for (double s : {0.0, 2.5, 9.9999}) {
    FrenetFrame f = path.frenet_at(s);
    CHECK((f.t - Vec3::UnitX()).norm() < 1e-12);
    CHECK((f.n - Vec3::UnitY()).norm() < 1e-12);
    CHECK((f.b - Vec3::UnitZ()).norm() < 1e-12);
    CHECK((path.position_at(s) - Vec3(s, 0, 0)).norm() < 1e-12);
  }
  CHECK(path.max_arclength_deviation() < 1e-6);
  CHECK(path.max_frenet_residual() < 1e-4);
}

TEST_CASE("constant curvature closes a circle") {
  const double radius = 2.0;
  FramePath path = circle_path(radius, 2.0 * M_PI * radius + 4e-3);
  Vec3 closure = path.position_at(2.0 * M_PI * radius);
  CHECK(closure.norm() < 1e-6 * radius);
  CHECK(path.max_arclength_deviation() < 1e-6);
  CHECK(path.max_frenet_residual() < 1e-4);

  // Quarter-arc frame: tangent rotated by 90 degrees.
  FrenetFrame quarter = path.frenet_at(0.5 * M_PI * radius);
  CHECK((quarter.t - Vec3::UnitY()).norm() < 1e-6);
}

TEST_CASE("frames stay orthonormal everywhere") {
  FramePath path = FramePath::build_planar(tube_profile(), Vec3::UnitX(), Vec3::Zero(),
                                           -Vec3::UnitY(), 4.2, 1e-3);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> us(0.0, path.length());
  for (int k = 0; k < 200; ++k) {
    FrenetFrame f = path.frenet_at(us(rng));
    CHECK(std::abs(f.t.norm() - 1.0) < 1e-10);
    CHECK(std::abs(f.n.norm() - 1.0) < 1e-10);
    CHECK(std::abs(f.b.norm() - 1.0) < 1e-10);
    CHECK((f.b - f.t.cross(f.n)).norm() < 1e-10);
  }
}

TEST_CASE("interpolation at a grid node returns the stored sample") {
  FramePath path = FramePath::build_planar(rooms_profile(), Vec3::UnitZ(), Vec3::Zero(),
                                           Vec3::UnitX(), 18.0, 1e-3);
  int i = 7321;
  FrenetFrame f = path.frenet_at(i * path.ds());
  CHECK((f.t - path.frame(i).t).norm() == 0.0);
  CHECK((path.position_at(i * path.ds()) - path.point(i)).norm() == 0.0);
}

TEST_CASE("tube profile peaks at exactly unit curvature") {
  CurvatureProfile k = tube_profile();
  double mx = k.max_abs(4.2, 1e-3);
  CHECK(mx == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(k(2.97) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rooms profile turns the heading by a quarter circle") {
  FramePath path = FramePath::build_planar(rooms_profile(), Vec3::UnitZ(), Vec3::Zero(),
                                           Vec3::UnitX(), 18.0, 1e-3);
  Vec3 t_end = path.frenet_at(18.0).t;
  CHECK(std::abs(t_end.dot(Vec3::UnitX())) < 2e-3);
  CHECK(t_end.dot(Vec3::UnitY()) > 0.999);
  CHECK(path.max_frenet_residual() < 1e-4);
  CHECK(path.max_arclength_deviation() < 1e-6);
}

TEST_CASE("planar paths carry zero torsion") {
  FramePath path = FramePath::build_planar(rooms_profile(), Vec3::UnitZ(), Vec3::Zero(),
                                           Vec3::UnitX(), 18.0, 1e-3);
  for (int i = 0; i < path.num_nodes(); i += 997) CHECK(path.frame(i).tau == 0.0);
}

TEST_CASE("constant curvature and torsion produce the closed-form helix") {
  const double k = 0.8, tau = 0.5;
  const double w2 = k * k + tau * tau;
  const double omega = std::sqrt(w2);
  const double a = k / w2, b = tau / w2;

  Vec3 p0(a, 0.0, 0.0);
  Vec3 t0 = Vec3(0.0, a * omega, b * omega);
  Vec3 n0(-1.0, 0.0, 0.0);
  FramePath path = FramePath::build_spatial(CurvatureProfile::constant(k),
                                            TorsionProfile::constant(tau), p0, t0, n0,
                                            6.0, 1e-3);
  for (double s : {0.5, 2.0, 4.4, 6.0}) {
    Vec3 expect(a * std::cos(omega * s), a * std::sin(omega * s), b * omega * s);
    CHECK((path.position_at(s) - expect).norm() < 1e-9);
  }
  CHECK(path.max_frenet_residual() < 1e-4);
  CHECK(path.max_arclength_deviation() < 1e-6);
}

TEST_CASE("projection on straight line and circle") {
  FramePath line = straight_path();
  CHECK(line.project_point(Vec3(3.0, 0.5, 0.0)) == doctest::Approx(3.0).epsilon(1e-12));

  const double radius = 2.0;
  FramePath circle = circle_path(radius, 0.6 * M_PI * radius);
  const double theta = 0.4;
  // Circle center is at (0, radius); displace the arc point radially.
  Vec3 center(0.0, radius, 0.0);
  Vec3 arc_pt = circle.position_at(radius * theta);
  Vec3 p = center + (arc_pt - center) * (1.0 - 0.2 / radius);
  CHECK(circle.project_point(p) == doctest::Approx(radius * theta).epsilon(1e-9));
}

TEST_CASE("projection agrees with exhaustive grid search near a real path") {
  FramePath path = FramePath::build_planar(rooms_profile(), Vec3::UnitZ(), Vec3::Zero(),
                                           Vec3::UnitX(), 18.0, 1e-3);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> us(0.5, 17.5);
  std::uniform_real_distribution<double> uw(-0.8, 0.8);
  for (int i = 0; i < 50; ++i) {
    double s_true = us(rng);
    Vec3 p = path.reconstruct_position(s_true, uw(rng), uw(rng));
    double s_hat = path.project_point(p);
    double s_ref = brute_force_projection(path, p);
    CHECK(std::abs(s_hat - s_ref) <= 2.0 * path.ds());
    CHECK(std::abs(s_hat - s_true) <= 2.0 * path.ds());
    // Orthogonality of the refined projection.
    FrenetFrame f = path.frenet_at(s_hat);
    CHECK(std::abs(f.t.dot(p - path.position_at(s_hat))) < 1e-9);
  }
}

TEST_CASE("projection hint restricts the search window") {
  FramePath path = FramePath::build_planar(rooms_profile(), Vec3::UnitZ(), Vec3::Zero(),
                                           Vec3::UnitX(), 18.0, 1e-3);
  Vec3 p = path.reconstruct_position(9.3, 0.2, -0.1);
  CHECK(path.project_point(p, 9.25) == doctest::Approx(9.3).epsilon(1e-6));
}

TEST_CASE("transverse coordinates invert reconstruction") {
  FramePath path = FramePath::build_planar(tube_profile(), Vec3::UnitX(), Vec3::Zero(),
                                           -Vec3::UnitY(), 4.2, 1e-3);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> us(0.1, 4.1);
  std::uniform_real_distribution<double> uw(-0.3, 0.3);
  for (int i = 0; i < 50; ++i) {
    double s = us(rng);
    double w1 = uw(rng), w2 = uw(rng);
    Vec3 p = path.reconstruct_position(s, w1, w2);
    double s_hat = path.project_point(p, s);
    auto [w1_hat, w2_hat] = path.transverse_coords(s_hat, p);
    CHECK(std::abs(s_hat - s) <= 2.0 * path.ds());
    CHECK(w1_hat == doctest::Approx(w1).epsilon(1e-8));
    CHECK(w2_hat == doctest::Approx(w2).epsilon(1e-8));
  }
}

TEST_CASE("straight-line transverse coordinates are plain offsets") {
  FramePath line = straight_path();
  auto [w1, w2] = line.transverse_coords(3.0, Vec3(3.0, 0.5, -0.2));
  CHECK(w1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w2 == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK((line.reconstruct_position(3.0, 0.5, -0.2) - Vec3(3.0, 0.5, -0.2)).norm() < 1e-12);
  auto [z1, z2] = line.transverse_coords(4.0, line.position_at(4.0));
  CHECK(z1 == 0.0);
  CHECK(z2 == 0.0);
}

TEST_CASE("inconsistent projection pair is rejected") {
  FramePath line = straight_path();
  CHECK_THROWS_AS(line.transverse_coords(2.0, Vec3(3.0, 0.5, 0.0)), InvalidArgumentError);
}

TEST_CASE("point between the legs of a U-turn is ambiguous") {
  // Half-turn of radius 0.5 between two antiparallel straights 1 m apart.
  CurvatureProfile k = CurvatureProfile::tanh_difference(2.0, 20.0, 4.0, 4.0 + M_PI_2);
  FramePath path = FramePath::build_planar(k, Vec3::UnitZ(), Vec3::Zero(), Vec3::UnitX(),
                                           9.0, 1e-3);
  // Midpoint between the two facing straight legs (equidistant by parallelism).
  Vec3 a = path.position_at(1.5);
  Vec3 facing = path.point(path.num_nodes() - 1);
  for (int i = 7000; i < path.num_nodes(); ++i) {
    if (std::abs(path.point(i).x() - a.x()) < std::abs(facing.x() - a.x())) {
      facing = path.point(i);
    }
  }
  CHECK_THROWS_AS(path.project_point(0.5 * (a + facing)), AmbiguousProjectionError);
  // The same geometry fails the clearance check at radius > leg separation.
  CHECK_THROWS_AS(path.check_local_clearance(1.2), InvalidArgumentError);
  CHECK_NOTHROW(path.check_local_clearance(0.4));
}

TEST_CASE("points beyond the capture radius are rejected") {
  FramePath circle = circle_path(1.0, 2.0);
  CHECK_THROWS_AS(circle.project_point(Vec3(-1.5, -0.5, 0.0)), OutOfTubeError);
}

TEST_CASE("profile domain must cover the path length") {
  auto samples = std::vector<double>(101, 0.1);
  CurvatureProfile k = CurvatureProfile::from_samples(1e-3, samples);  // 0.1 m domain
  CHECK_THROWS_AS(FramePath::build_planar(k, Vec3::UnitZ(), Vec3::Zero(), Vec3::UnitX(),
                                          1.0, 1e-3),
                  InvalidArgumentError);
}

TEST_CASE("t0 must be orthogonal to the binormal") {
  CHECK_THROWS_AS(FramePath::build_planar(CurvatureProfile::zero(), Vec3::UnitZ(),
                                          Vec3::Zero(), Vec3(1.0, 0.0, 0.2), 1.0, 1e-3),
                  InvalidArgumentError);
}

TEST_CASE("sampled profiles load from CSV and reject Lipschitz jumps") {
  const char* file = "/tmp/mintime_profile_test.csv";
  {
    std::ofstream out(file);
    out.precision(12);
    out << "s,k\n";
    for (int i = 0; i <= 2000; ++i) {
      double s = i * 1e-3;
      out << s << "," << 0.3 * std::sin(s) << "\n";
    }
  }
  CurvatureProfile k = CurvatureProfile::from_csv(file);
  CHECK(k(0.5) == doctest::Approx(0.3 * std::sin(0.5)).epsilon(1e-9));
  CHECK(k.domain_length() == doctest::Approx(2.0));

  std::vector<double> jumpy = {0.0, 0.0, 5.0, 0.0};
  CHECK_THROWS_AS(CurvatureProfile::from_samples(1e-3, jumpy, 1e3), InvalidArgumentError);
  std::remove(file);
}

TEST_SUITE_END();

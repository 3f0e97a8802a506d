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

#include <Eigen/Sparse>
#include <cmath>
#include <random>

#include "mintime/continuation.hpp"
#include "mintime/flatness_init.hpp"
#include "mintime/newton_solver.hpp"
#include "mintime/time_map.hpp"
#include "mintime/transverse_problem.hpp"

using namespace mintime;

namespace {

// ----------------------------------------------------------------------
// Synthetic problems for the generic solver machinery.

// Double integrator with quadratic cost (no constraints, no barriers).
struct LinearProblem {
  static constexpr int kNX = 2;
  static constexpr int kNU = 1;
  using XVec = Eigen::Vector2d;
  using UVec = Eigen::Matrix<double, 1, 1>;
  using AMat = Eigen::Matrix2d;
  using BMat = Eigen::Matrix<double, 2, 1>;

  int nodes = 501;
  double h = 1e-3;
  AMat a = (AMat() << 0.0, 1.0, 0.0, 0.0).finished();
  BMat b = (BMat() << 0.0, 1.0).finished();
  AMat q = (AMat() << 1.0, 0.0, 0.0, 0.1).finished();
  double r = 0.5;
  XVec q_lin = XVec(0.2, 0.0);
  double r_lin = -0.1;
  AMat qf = (AMat() << 2.0, 0.0, 0.0, 0.5).finished();
  XVec qf_lin = XVec(-0.3, 0.4);

  int num_nodes() const { return nodes; }
  double ds() const { return h; }
  XVec field(int, const XVec& x, const UVec& u) const { return a * x + b * u; }
  void jacobians(int, const XVec&, const UVec&, AMat* aj, BMat* bj) const {
    *aj = a;
    *bj = b;
  }
  double stage_cost(int, const XVec& x, const UVec& u) const {
    return 0.5 * x.dot(q * x) + q_lin.dot(x) + 0.5 * r * u[0] * u[0] + r_lin * u[0];
  }
  void stage_derivs(int, const XVec& x, const UVec& u, double* cost,
                    Eigen::Vector3d* grad, Eigen::Matrix3d* hess_exact,
                    Eigen::Matrix3d* hess_psd) const {
    *cost = stage_cost(0, x, u);
    grad->head<2>() = q * x + q_lin;
    (*grad)[2] = r * u[0] + r_lin;
    hess_exact->setZero();
    hess_exact->topLeftCorner<2, 2>() = q;
    (*hess_exact)(2, 2) = r;
    *hess_psd = *hess_exact;
  }
  double terminal_cost(const XVec& x) const { return 0.5 * x.dot(qf * x) + qf_lin.dot(x); }
  void terminal_derivs(const XVec& x, XVec* grad, AMat* hess) const {
    *grad = qf * x + qf_lin;
    *hess = qf;
  }
  bool state_in_domain(int, const XVec& x) const { return x.allFinite(); }
  double min_stage_margin(int, const XVec&, const UVec&) const {
    return std::numeric_limits<double>::infinity();
  }
  double min_final_margin(const XVec&) const {
    return std::numeric_limits<double>::infinity();
  }
  AMat gain_state_weight() const { return AMat::Identity(); }
  Eigen::Matrix<double, 1, 1> gain_input_weight() const {
    return Eigen::Matrix<double, 1, 1>::Identity();
  }
  AMat gain_terminal_weight() const { return AMat::Identity(); }
};

// Scalar system for the closed-form Riccati check.
struct ScalarProblem {
  static constexpr int kNX = 1;
  static constexpr int kNU = 1;
  using XVec = Eigen::Matrix<double, 1, 1>;
  using UVec = Eigen::Matrix<double, 1, 1>;
  using AMat = Eigen::Matrix<double, 1, 1>;
  using BMat = Eigen::Matrix<double, 1, 1>;

  int nodes = 2001;
  double h = 1e-3;
  double a = -0.6, b = 0.9, q = 1.3, r = 0.4, p_final = 0.2;

  int num_nodes() const { return nodes; }
  double ds() const { return h; }
  XVec field(int, const XVec& x, const UVec& u) const {
    return XVec((a * x + b * u).eval());
  }
  void jacobians(int, const XVec&, const UVec&, AMat* aj, BMat* bj) const {
    (*aj)(0, 0) = a;
    (*bj)(0, 0) = b;
  }
  double stage_cost(int, const XVec&, const UVec&) const { return 0.0; }
  void stage_derivs(int, const XVec&, const UVec&, double* cost, Eigen::Vector2d* grad,
                    Eigen::Matrix2d* he, Eigen::Matrix2d* hp) const {
    *cost = 0.0;
    grad->setZero();
    he->setZero();
    hp->setZero();
  }
  double terminal_cost(const XVec&) const { return 0.0; }
  void terminal_derivs(const XVec&, XVec* grad, AMat* hess) const {
    grad->setZero();
    hess->setZero();
  }
  bool state_in_domain(int, const XVec& x) const { return x.allFinite(); }
  double min_stage_margin(int, const XVec&, const UVec&) const {
    return std::numeric_limits<double>::infinity();
  }
  double min_final_margin(const XVec&) const {
    return std::numeric_limits<double>::infinity();
  }
  AMat gain_state_weight() const { return AMat::Constant(q); }
  Eigen::Matrix<double, 1, 1> gain_input_weight() const {
    return Eigen::Matrix<double, 1, 1>::Constant(r);
  }
  AMat gain_terminal_weight() const { return AMat::Constant(p_final); }
};

// Closed-form solution of p' = beta p^2 - 2 a p - q (the backward Riccati
// read forward in s) with p(L) = pT.
double scalar_riccati_closed_form(double s, double L, double a, double beta, double q,
                                  double pT) {
  const double gamma = std::sqrt(a * a + beta * q);
  const double p_plus = (a + gamma) / beta;
  const double p_minus = (a - gamma) / beta;
  // p(s) = p_minus + (p_plus - p_minus) / (1 - C exp(2 gamma s))
  const double target = p_plus - p_minus;
  const double c = (1.0 - target / (pT - p_minus)) * std::exp(-2.0 * gamma * L);
  return p_minus + target / (1.0 - c * std::exp(2.0 * gamma * s));
}

// Steady-state Riccati solution from the stable invariant subspace of the
// Hamiltonian matrix (independent of the sweep integrator).
Eigen::MatrixXd algebraic_riccati(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& q, const Eigen::MatrixXd& r) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd ham(2 * n, 2 * n);
  ham << a, -b * r.inverse() * b.transpose(), -q, -a.transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(ham);
  Eigen::MatrixXcd x(n, n), y(n, n);
  int col = 0;
  for (int i = 0; i < 2 * n && col < n; ++i) {
    if (es.eigenvalues()[i].real() < 0.0) {
      x.col(col) = es.eigenvectors().block(0, i, n, 1);
      y.col(col) = es.eigenvectors().block(n, i, n, 1);
      ++col;
    }
  }
  REQUIRE(col == n);
  Eigen::MatrixXcd p = y * x.inverse();
  return p.real();
}

// Fully open-loop trajectory of a model under constant input.
template <class P>
TrajectoryT<P::kNX, P::kNU> rollout(const P& prob, const typename P::XVec& x0,
                                    const typename P::UVec& u) {
  TrajectoryT<P::kNX, P::kNU> traj;
  traj.ds = prob.ds();
  traj.x.resize(prob.num_nodes());
  traj.u.assign(prob.num_nodes(), u);
  traj.x[0] = x0;
  for (int i = 0; i + 1 < prob.num_nodes(); ++i) {
    traj.x[i + 1] = rk4_step(prob, i, traj.x[i], traj.u[i], traj.ds);
  }
  return traj;
}

// Direct sparse KKT solve of the discrete linear-quadratic transcription;
// the independent reference for the Riccati-based search direction.
void kkt_optimum(const LinearProblem& prob, const Eigen::Vector2d& x0,
                 std::vector<Eigen::Vector2d>* x_opt, std::vector<double>* u_opt) {
  const int n = prob.num_nodes();
  const int steps = n - 1;
  Eigen::Matrix2d ad;
  Eigen::Matrix<double, 2, 1> bd;
  rk4_step_jacobians(prob, 0, Eigen::Vector2d::Zero(), Eigen::Matrix<double, 1, 1>::Zero(),
                     prob.ds(), &ad, &bd);

  // Variables: u_0..u_{n-1} then x_1..x_{n-1}; constraints: the steps.
  const int nu = n;
  const int nx = 2 * steps;
  const int nv = nu + nx;
  const int nc = 2 * steps;
  auto ucol = [&](int i) { return i; };
  auto xcol = [&](int i) { return nu + 2 * (i - 1); };  // i in [1, n-1]

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv + nc);

  auto w = [&](int i) { return trapezoid_weight(i, n, prob.ds()); };
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(ucol(i), ucol(i), w(i) * prob.r);
    rhs[ucol(i)] -= w(i) * prob.r_lin;
  }
  for (int i = 1; i < n; ++i) {
    Eigen::Matrix2d qi = w(i) * prob.q;
    Eigen::Vector2d gi = w(i) * prob.q_lin;
    if (i == n - 1) {
      qi += prob.qf;
      gi += prob.qf_lin;
    }
    for (int rr = 0; rr < 2; ++rr) {
      for (int cc = 0; cc < 2; ++cc) trip.emplace_back(xcol(i) + rr, xcol(i) + cc, qi(rr, cc));
      rhs[xcol(i) + rr] -= gi[rr];
    }
  }
  for (int i = 0; i < steps; ++i) {
    const int row = nv + 2 * i;
    for (int rr = 0; rr < 2; ++rr) {
      trip.emplace_back(row + rr, xcol(i + 1) + rr, 1.0);         // x_{i+1}
      trip.emplace_back(xcol(i + 1) + rr, row + rr, 1.0);         // symmetric block
      trip.emplace_back(row + rr, ucol(i), -bd(rr, 0));           // -Bd u_i
      trip.emplace_back(ucol(i), row + rr, -bd(rr, 0));
      if (i > 0) {
        for (int cc = 0; cc < 2; ++cc) {
          trip.emplace_back(row + rr, xcol(i) + cc, -ad(rr, cc));  // -Ad x_i
          trip.emplace_back(xcol(i) + cc, row + rr, -ad(rr, cc));
        }
      }
    }
    if (i == 0) rhs.segment<2>(row) = ad * x0;
  }

  Eigen::SparseMatrix<double> kkt(nv + nc, nv + nc);
  kkt.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(kkt);
  REQUIRE(lu.info() == Eigen::Success);
  Eigen::VectorXd sol = lu.solve(rhs);

  x_opt->resize(n);
  u_opt->resize(n);
  (*x_opt)[0] = x0;
  for (int i = 1; i < n; ++i) (*x_opt)[i] = sol.segment<2>(xcol(i));
  for (int i = 0; i < n; ++i) (*u_opt)[i] = sol[ucol(i)];
}

// A loose straight-tube problem used by several tests.
struct StraightSetup {
  FramePath path;
  InputStateBounds bounds;
  CorridorSpec corridor;
  FinalBox box;
  VehicleParams vehicle;

  explicit StraightSetup(double length = 3.0)
      : path(FramePath::build_planar(CurvatureProfile::zero(), Vec3::UnitZ(), Vec3::Zero(),
                                     Vec3::UnitX(), length, 1e-3)) {
    const int n = path.num_nodes();
    const double ds = path.ds();
    bounds.roll_rate_max = 2.0;
    bounds.pitch_rate_max = 2.0;
    bounds.yaw_rate_max = 2.0;
    bounds.thrust_min = 0.10;
    bounds.thrust_max = 0.65;
    bounds.roll_max = BoundProfile::constant(n, ds, M_PI_4);
    bounds.pitch_max = BoundProfile::constant(n, ds, M_PI_4);
    bounds.yaw_max = BoundProfile::constant(n, ds, M_PI_4);
    corridor.section = CorridorSpec::Section::kCircular;
    corridor.r_obs = BoundProfile::constant(n, ds, 0.45);
    box.lo << -0.4, -0.4, -1.0, -8.0, -8.0, -1.2, -1.2, -1.2;
    box.hi << 0.4, 0.4, 12.0, 8.0, 8.0, 1.2, 1.2, 1.2;
  }

  TransverseProblem problem() const {
    return TransverseProblem(&path, vehicle, bounds, corridor, box);
  }
};

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("gain sweep reproduces the closed-form scalar Riccati solution") {
  ScalarProblem prob;
  TrajectoryT<1, 1> traj = rollout(prob, ScalarProblem::XVec::Constant(1.0),
                                   ScalarProblem::UVec::Constant(0.0));
  NewtonOptions opts;
  opts.gain_terminal = GainTerminal::kDesignerWeight;
  auto gains = design_gain(prob, traj, opts);
  const double beta = prob.b * prob.b / prob.r;
  const double L = traj.length();
  for (int i = 0; i < prob.num_nodes(); i += 100) {
    double p = scalar_riccati_closed_form(i * prob.h, L, prob.a, beta, prob.q, prob.p_final);
    double k_expect = prob.b * p / prob.r;
    CHECK(gains.K[i](0, 0) == doctest::Approx(k_expect).epsilon(1e-8));
  }
  CHECK(gains.max_residual < 1e-6);
}

TEST_CASE("zero weights give a zero gain schedule") {
  StraightSetup setup(1.0);
  TransverseProblem prob = setup.problem();
  prob.set_gain_scales(0.0, 1.0);
  InitSpec init;
  Trajectory traj = initial_trajectory(prob, init).trajectory;
  auto gains = design_gain(prob, traj);
  CHECK(gains.max_gain_norm == 0.0);
}

TEST_CASE("interior gain matches the algebraic Riccati solution on a long cruise") {
  // Time-invariant linearization: straight path, constant cruise state.
  StraightSetup setup(30.0);
  TransverseProblem prob = setup.problem();
  InitSpec init;
  init.speed = 1.0;
  Trajectory traj = initial_trajectory(prob, init).trajectory;
  // Start the sweep from the plain designer weight so the interior value is
  // genuinely produced by the integration, not by the terminal condition.
  NewtonOptions opts;
  opts.gain_terminal = GainTerminal::kDesignerWeight;
  auto gains = design_gain(prob, traj, opts);

  StateMat a;
  StateInputMat b;
  prob.jacobians(2 * 15000, traj.x[15000], traj.u[15000], &a, &b);
  Eigen::MatrixXd p_inf = algebraic_riccati(a, b, Eigen::MatrixXd::Identity(8, 8),
                                            prob.gain_input_weight());
  Eigen::MatrixXd k_inf = prob.gain_input_weight().ldlt().solve(b.transpose() * p_inf);
  CHECK((gains.K[15000] - k_inf).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("projection is the identity on trajectories") {
  StraightSetup setup;
  TransverseProblem prob = setup.problem();
  InitSpec init;
  Trajectory traj = initial_trajectory(prob, init).trajectory;
  CHECK(trajectory_defect(prob, traj) < 1e-8);

  auto gains = design_gain(prob, traj);
  Trajectory again = project(prob, traj.as_curve(), gains, traj.x[0]);
  double diff = 0.0;
  for (int i = 0; i < traj.num_nodes(); ++i) {
    diff = std::max(diff, (again.x[i] - traj.x[i]).lpNorm<Eigen::Infinity>());
    diff = std::max(diff, (again.u[i] - traj.u[i]).lpNorm<Eigen::Infinity>());
  }
  CHECK(diff < 1e-10);

  // And the projection of a projection changes nothing further.
  Trajectory third = project(prob, again.as_curve(), gains, again.x[0]);
  for (int i = 0; i < traj.num_nodes(); ++i) {
    CHECK((third.x[i] - again.x[i]).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("zero gains reduce the projection to open-loop integration") {
  StraightSetup setup(1.0);
  TransverseProblem prob = setup.problem();
  InitSpec init;
  Trajectory traj = initial_trajectory(prob, init).trajectory;

  GainScheduleT<TransverseProblem> zero;
  zero.K.assign(traj.x.size(), InputGainMat::Zero());
  Curve curve = traj.as_curve();
  // Perturb the curve states; open loop must ignore them.
  for (auto& x : curve.x) x[kW1] += 0.1;
  Trajectory open_loop = project(prob, curve, zero, traj.x[0]);
  for (int i = 0; i < traj.num_nodes(); ++i) {
    CHECK((open_loop.u[i] - curve.u[i]).lpNorm<Eigen::Infinity>() == 0.0);
  }
  StateVec x = traj.x[0];
  for (int i = 0; i + 1 < traj.num_nodes(); ++i) {
    x = rk4_step(prob, i, x, curve.u[i], traj.ds);
  }
  CHECK((open_loop.x.back() - x).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("projection washes out a mid-grid state perturbation") {
  StraightSetup setup;
  TransverseProblem prob = setup.problem();
  InitSpec init;
  Trajectory traj = initial_trajectory(prob, init).trajectory;
  auto gains = design_gain(prob, traj);

  Curve curve = traj.as_curve();
  int mid = traj.num_nodes() / 2;
  curve.x[mid][kW1] += 1e-3;
  curve.x[mid][kV2] += 1e-3;
  Trajectory projected = project(prob, curve, gains, traj.x[0]);
  CHECK(trajectory_defect(prob, projected) < 1e-8);
  CHECK((projected.x.back() - traj.x.back()).lpNorm<Eigen::Infinity>() < 1e-4);

  // Independent integration of the same feedback system with a step-halved
  // reference integrator.
  StateVec x = traj.x[0];
  double worst = 0.0;
  const int substeps = 16;
  for (int i = 0; i + 1 < traj.num_nodes(); ++i) {
    InputVec u = curve.u[i] + gains.K[i] * (curve.x[i] - x);
    worst = std::max(worst, (x - projected.x[i]).lpNorm<Eigen::Infinity>());
    const double hh = traj.ds / substeps;
    for (int k = 0; k < substeps; ++k) {
      // Fine steps reuse the in-interval field via the half-grid samples.
      StateVec k1 = prob.field(2 * i, x, u);
      StateVec k2 = prob.field(2 * i + 1, x + 0.5 * hh * k1, u);
      StateVec k3 = prob.field(2 * i + 1, x + 0.5 * hh * k2, u);
      StateVec k4 = prob.field(2 * i + 2, x + hh * k3, u);
      x += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("one Newton step solves the synthetic linear-quadratic instance") {
  LinearProblem prob;
  Eigen::Vector2d x0(1.0, -0.5);
  auto traj = rollout(prob, x0, LinearProblem::UVec::Constant(0.3));

  NewtonOptions opts;
  auto gains = design_gain(prob, traj, opts);
  auto dir = search_direction(prob, traj, gains, opts);
  CHECK(dir.dg_zeta < 0.0);

  double cost0 = total_cost(prob, traj);
  auto ls = line_search(prob, traj, dir, gains, cost0, opts);
  CHECK(ls.gamma == 1.0);

  std::vector<Eigen::Vector2d> x_opt;
  std::vector<double> u_opt;
  kkt_optimum(prob, x0, &x_opt, &u_opt);

  double err = 0.0;
  for (int i = 0; i < prob.num_nodes(); ++i) {
    err = std::max(err, (ls.trajectory.x[i] - x_opt[i]).lpNorm<Eigen::Infinity>());
    err = std::max(err, std::abs(ls.trajectory.u[i][0] - u_opt[i]));
  }
  CHECK(err < 1e-8);

  // At the optimum the next direction is negligible and the solver stops in
  // zero iterations.
  auto dir2 = search_direction(prob, ls.trajectory, design_gain(prob, ls.trajectory, opts),
                               opts);
  CHECK(std::abs(dir2.dg_zeta) < 1e-10 * (1.0 + std::abs(ls.cost)));
  auto solved = solve_fixed_barrier(prob, ls.trajectory, opts);
  CHECK(solved.report.converged);
  CHECK(solved.report.iterations.empty());
}

TEST_CASE("directional derivative of the projected functional") {
  StraightSetup setup;
  TransverseProblem prob = setup.problem();
  prob.set_barrier(BarrierParams{});
  InitSpec init;
  Trajectory traj = initial_trajectory(prob, init).trajectory;

  NewtonOptions opts;
  auto gains = design_gain(prob, traj, opts);
  auto dir = search_direction(prob, traj, gains, opts);
  REQUIRE(dir.dg_zeta < 0.0);

  const double h = 1e-5;
  Curve curve = traj.as_curve();
  for (int i = 0; i < traj.num_nodes(); ++i) {
    curve.x[i] += h * dir.z[i];
    curve.u[i] += h * dir.v[i];
  }
  Trajectory bumped = project(prob, curve, gains, traj.x[0]);
  double g0 = total_cost(prob, traj);
  double g1 = total_cost(prob, bumped);
  double fd = (g1 - g0) / h;
  CHECK(std::abs(fd - dir.dg_zeta) <= 1e-4 * std::abs(dir.dg_zeta));
}

TEST_CASE("line search backtracks when the full step breaks the state domain") {
  StraightSetup setup;
  TransverseProblem prob = setup.problem();
  prob.set_barrier(BarrierParams{});
  InitSpec init;
  Trajectory traj = initial_trajectory(prob, init).trajectory;

  NewtonOptions opts;
  auto gains = design_gain(prob, traj, opts);
  auto dir = search_direction(prob, traj, gains, opts);
  REQUIRE(dir.dg_zeta < 0.0);

  // Blow the direction up so the full step reverses the tangential velocity.
  double vmax = 0.0;
  for (const auto& z : dir.z) vmax = std::max(vmax, std::abs(z[kV1]));
  double scale = 3.0 / std::max(vmax, 1e-9);
  for (auto& z : dir.z) z *= scale;
  for (auto& v : dir.v) v *= scale;
  dir.dg_zeta *= scale;

  double cost0 = total_cost(prob, traj);
  auto ls = line_search(prob, traj, dir, gains, cost0, opts);
  CHECK(ls.gamma < 1.0);
  CHECK(ls.cost < cost0);
  CHECK(min_stage_margin_over(prob, ls.trajectory) > 0.0);
  CHECK(trajectory_defect(prob, ls.trajectory) < 1e-8);
}

TEST_CASE("straight-corridor solve approaches the point-mass time bound") {
  StraightSetup setup(3.0);
  TransverseProblem prob = setup.problem();
  InitSpec init;
  Trajectory traj0 = initial_trajectory(prob, init).trajectory;

  NewtonOptions opts;
  opts.max_iterations = 40;
  Schedule sched;
  ContinuationResult result = continuation(prob, traj0, sched, opts);
  CHECK(result.success);

  // Tilt-limited horizontal acceleration is g at the 45-degree angle bound;
  // the time of the accelerate-from-0.5 profile lower-bounds the solve.
  const double g = setup.vehicle.gravity;
  const double v0 = 0.5;
  double t_bound = 0.0;
  const double L = setup.path.length();
  t_bound = (std::sqrt(v0 * v0 + 2.0 * g * L) - v0) / g;
  double t_solved = maneuver_time(result.trajectory, setup.path);
  CHECK(t_solved >= t_bound - 1e-6);
  CHECK(t_solved <= 1.35 * t_bound);

  // Cost decreases monotonically within every outer stage.
  for (size_t k = 1; k < result.iterations.size(); ++k) {
    if (result.iterations[k].first == result.iterations[k - 1].first) {
      CHECK(result.iterations[k].second.cost <= result.iterations[k - 1].second.cost + 1e-12);
    }
  }
  // Recursive feasibility along the whole solve.
  for (const auto& [outer, rec] : result.iterations) {
    CHECK(rec.min_stage_margin > 0.0);
    CHECK(rec.min_final_margin > 0.0);
    CHECK(rec.defect < 1e-8);
    CHECK(rec.riccati_residual < 1e-6);
  }
}

TEST_CASE("a one-stage schedule equals the fixed-barrier solve") {
  StraightSetup setup(1.5);
  TransverseProblem prob = setup.problem();
  InitSpec init;
  Trajectory traj0 = initial_trajectory(prob, init).trajectory;

  NewtonOptions opts;
  Schedule sched;
  sched.max_outer = 1;
  ContinuationResult cont = continuation(prob, traj0, sched, opts);

  TransverseProblem prob2 = setup.problem();
  prob2.set_barrier(sched.at(0));
  auto fixed = solve_fixed_barrier(prob2, traj0, opts);

  REQUIRE(cont.success);
  CHECK(cont.outers.size() == 1);
  double diff = 0.0;
  for (int i = 0; i < traj0.num_nodes(); ++i) {
    diff = std::max(diff,
                    (cont.trajectory.x[i] - fixed.trajectory.x[i]).lpNorm<Eigen::Infinity>());
  }
  CHECK(diff == 0.0);
}

TEST_SUITE_END();

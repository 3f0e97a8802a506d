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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mintime/discretization.hpp"
#include "mintime/errors.hpp"
#include "mintime/kernels.hpp"

namespace mintime {

enum class NewtonHessian { kExact, kGaussNewton };

// Terminal condition of the gain-design Riccati sweep. The steady-state
// condition (algebraic solution at the final node) avoids the terminal
// boundary layer that a plain weight matrix induces when the input columns
// are strongly scaled; the designer weight remains available.
enum class GainTerminal { kSteadyState, kDesignerWeight };

struct NewtonOptions {
  double tol = 1e-6;             // stop when |Dg.zeta| <= tol * (1 + |g|)
  int max_iterations = 50;
  double armijo_alpha = 0.4;
  double backtrack_factor = 0.5;
  double gamma_min = 1e-6;
  NewtonHessian hessian = NewtonHessian::kExact;
  GainTerminal gain_terminal = GainTerminal::kSteadyState;
  double reg_lambda = 1e-6;      // Gauss-Newton fallback shift
  double gain_cap = 1e6;
  ExecPolicy exec;
};

// Stabilizing solution of A'P + PA - P B R^-1 B' P + Q = 0 from the stable
// invariant subspace of the Hamiltonian matrix. Returns an empty matrix when
// the subspace is defective (e.g. undetectable modes on the imaginary axis).
inline Eigen::MatrixXd solve_algebraic_riccati(const Eigen::MatrixXd& a,
                                               const Eigen::MatrixXd& b,
                                               const Eigen::MatrixXd& q,
                                               const Eigen::MatrixXd& r) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd ham(2 * n, 2 * n);
  ham << a, -b * r.llt().solve(b.transpose()), -q, -a.transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(ham);
  if (es.info() != Eigen::Success) return {};
  Eigen::MatrixXcd x(n, n), y(n, n);
  int col = 0;
  for (int i = 0; i < 2 * n && col < n; ++i) {
    if (es.eigenvalues()[i].real() < -1e-9) {
      x.col(col) = es.eigenvectors().block(0, i, n, 1);
      y.col(col) = es.eigenvectors().block(n, i, n, 1);
      ++col;
    }
  }
  if (col != n) return {};
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(x);
  if (!lu.isInvertible()) return {};
  Eigen::MatrixXd p = (y * lu.inverse()).real();
  p = 0.5 * (p + p.transpose().eval());
  if (!p.allFinite()) return {};
  return p;
}

struct IterationRecord {
  int iteration = 0;
  double gamma = 0.0;
  double cost = 0.0;
  double descent = 0.0;  // Dg . zeta (negative along descent directions)
  double min_stage_margin = 0.0;
  double min_final_margin = 0.0;
  double defect = 0.0;
  double riccati_residual = 0.0;
  int hessian_fallbacks = 0;
};

struct FixedBarrierReport {
  std::vector<IterationRecord> iterations;
  bool converged = false;
  std::string stop_reason;
};

template <class P>
struct GainScheduleT {
  std::vector<Eigen::Matrix<double, P::kNU, P::kNX>> K;  // per node
  double max_residual = 0.0;  // differential-Riccati consistency, relative
  double max_gain_norm = 0.0;
};

template <class P>
struct DirectionT {
  std::vector<Eigen::Matrix<double, P::kNX, 1>> z;
  std::vector<Eigen::Matrix<double, P::kNU, 1>> v;
  double dg_zeta = 0.0;
  double quad_model = 0.0;  // dg_zeta + 1/2 * second-order term
  int hessian_fallbacks = 0;

  double max_norm() const {
    double m = 0.0;
    for (const auto& zi : z) m = std::max(m, zi.template lpNorm<Eigen::Infinity>());
    for (const auto& vi : v) m = std::max(m, vi.template lpNorm<Eigen::Infinity>());
    return m;
  }
};

// Trapezoid weight of node i on an (n-1)-interval grid.
inline double trapezoid_weight(int i, int n, double ds) {
  return (i == 0 || i == n - 1) ? 0.5 * ds : ds;
}

// ----------------------------------------------------------------------
// Projection operator: closed-loop integration of the grid dynamics around
// a state-input curve. The node input is u_c + K (x_c - x) evaluated at the
// realized state, so a trajectory is a fixed point and the output always
// satisfies the grid dynamics exactly.
template <class P>
TrajectoryT<P::kNX, P::kNU> project(const P& prob, const CurveT<P::kNX, P::kNU>& curve,
                                    const GainScheduleT<P>& gains,
                                    const Eigen::Matrix<double, P::kNX, 1>& x0) {
  const int n = curve.num_nodes();
  if (static_cast<int>(gains.K.size()) != n) {
    throw InvalidArgumentError("gain schedule size does not match curve");
  }
  if (!curve.all_finite()) throw InvalidArgumentError("curve contains non-finite values");

  TrajectoryT<P::kNX, P::kNU> traj;
  traj.ds = curve.ds;
  traj.x.resize(n);
  traj.u.resize(n);
  traj.x[0] = x0;
  if (!prob.state_in_domain(0, x0)) {
    throw ProjectionDivergedError("initial state violates the state domain", 0.0);
  }
  for (int i = 0; i < n; ++i) {
    traj.u[i] = curve.u[i] + gains.K[i] * (curve.x[i] - traj.x[i]);
    if (i + 1 == n) break;
    Eigen::Matrix<double, P::kNX, 1> next;
    try {
      next = rk4_step(prob, i, traj.x[i], traj.u[i], traj.ds);
    } catch (const Error& e) {
      throw ProjectionDivergedError(std::string("projection diverged: ") + e.what(),
                                    i * traj.ds);
    }
    if (!next.allFinite() || !prob.state_in_domain(2 * (i + 1), next)) {
      throw ProjectionDivergedError("projection left the admissible state domain",
                                    (i + 1) * traj.ds);
    }
    traj.x[i + 1] = next;
  }
  return traj;
}

// ----------------------------------------------------------------------
// Projection gain: backward RK4 integration of the differential Riccati
// equation -P' = A'P + PA - P B R^-1 B' P + Q on the linearization along the
// trajectory, with designer weights from the problem. Also reports the
// worst relative residual of the integrated solution (five-point stencil).
template <class P>
GainScheduleT<P> design_gain(const P& prob, const TrajectoryT<P::kNX, P::kNU>& traj,
                             const NewtonOptions& opts = {}) {
  constexpr int NX = P::kNX;
  constexpr int NU = P::kNU;
  using AMat = Eigen::Matrix<double, NX, NX>;
  using BMat = Eigen::Matrix<double, NX, NU>;
  using RMat = Eigen::Matrix<double, NU, NU>;

  const int n = traj.num_nodes();
  const double h = traj.ds;

  std::vector<AMat> A;
  std::vector<BMat> B;
  linearize_field_batch(prob, traj, opts.exec, &A, &B);

  const AMat q = prob.gain_state_weight();
  const RMat r = prob.gain_input_weight();
  const AMat p_final = prob.gain_terminal_weight();
  Eigen::LLT<RMat> r_llt(r);
  if (r_llt.info() != Eigen::Success) {
    throw GainDesignError("gain input weight is not positive definite");
  }

  auto rhs = [&](const AMat& p, const AMat& a, const BMat& b) -> AMat {
    BMat pb = p * b;
    AMat value = a.transpose() * p + p * a - pb * r_llt.solve(pb.transpose()) + q;
    return value;
  };

  std::vector<AMat> pmats(n);
  AMat p_terminal = p_final;
  if (opts.gain_terminal == GainTerminal::kSteadyState &&
      q.template lpNorm<Eigen::Infinity>() > 1e-12) {
    Eigen::MatrixXd p_inf = solve_algebraic_riccati(A[n - 1], B[n - 1], q, r);
    if (p_inf.size() > 0) p_terminal = p_inf;
  }
  pmats[n - 1] = p_terminal;
  GainScheduleT<P> gains;

  // One backward interval with `substeps` RK4 stages; node data linearly
  // interpolated across the interval.
  auto sweep_interval = [&](int i, const AMat& p_start, int substeps) -> AMat {
    const double hh = h / substeps;
    AMat p = p_start;
    for (int stage = 0; stage < substeps; ++stage) {
      auto blend = [&](double frac, AMat* ab, BMat* bb_out) {
        double alpha = (stage + frac) / substeps;  // 0 at s_{i+1}, 1 at s_i
        *ab = (1.0 - alpha) * A[i + 1] + alpha * A[i];
        *bb_out = (1.0 - alpha) * B[i + 1] + alpha * B[i];
      };
      AMat a0, a1, a2;
      BMat b0, b1, b2;
      blend(0.0, &a0, &b0);
      blend(0.5, &a1, &b1);
      blend(1.0, &a2, &b2);
      AMat k1 = rhs(p, a0, b0);
      AMat k2 = rhs(p + 0.5 * hh * k1, a1, b1);
      AMat k3 = rhs(p + 0.5 * hh * k2, a1, b1);
      AMat k4 = rhs(p + hh * k3, a2, b2);
      p += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return p;
  };

  for (int i = n - 2; i >= 0; --i) {
    // The substep count keeps h * |dRHS/dP| inside the RK4 stability region;
    // the step-doubled solution provides the per-node integration defect and
    // is the value kept.
    const AMat& p1 = pmats[i + 1];
    double bb = (B[i + 1] * r_llt.solve(B[i + 1].transpose())).cwiseAbs().maxCoeff();
    double stiffness =
        2.0 * (A[i + 1].cwiseAbs().maxCoeff() + bb * p1.template lpNorm<Eigen::Infinity>());
    int substeps = std::clamp(static_cast<int>(std::ceil(h * stiffness / 0.8)), 1, 256);
    AMat coarse = sweep_interval(i, p1, substeps);
    AMat fine = sweep_interval(i, p1, 2 * substeps);
    double defect = (coarse - fine).template lpNorm<Eigen::Infinity>() /
                    (1.0 + fine.template lpNorm<Eigen::Infinity>());
    gains.max_residual = std::max(gains.max_residual, defect);
    pmats[i] = 0.5 * (fine + fine.transpose().eval());
    if (!pmats[i].allFinite() || pmats[i].template lpNorm<Eigen::Infinity>() > 1e9) {
      throw GainDesignError("Riccati sweep blew up at s = " + std::to_string(i * h));
    }
  }

  gains.K.resize(n);
  for (int i = 0; i < n; ++i) {
    gains.K[i] = r_llt.solve(B[i].transpose() * pmats[i]);
    gains.max_gain_norm =
        std::max(gains.max_gain_norm, gains.K[i].template lpNorm<Eigen::Infinity>());
  }
  if (gains.max_gain_norm > opts.gain_cap) {
    throw GainDesignError("gain norm " + std::to_string(gains.max_gain_norm) +
                          " exceeds cap");
  }
  return gains;
}

// ----------------------------------------------------------------------
// Total cost of a trajectory: trapezoid quadrature of the stage cost plus
// the terminal term.
template <class P>
double total_cost(const P& prob, const TrajectoryT<P::kNX, P::kNU>& traj,
                  const ExecPolicy& exec = {}) {
  std::vector<double> stage;
  stage_cost_batch(prob, traj, exec, &stage);
  const int n = traj.num_nodes();
  double g = 0.0;
  for (int i = 0; i < n; ++i) g += trapezoid_weight(i, n, traj.ds) * stage[i];
  return g + prob.terminal_cost(traj.x.back());
}

template <class P>
double min_stage_margin_over(const P& prob, const TrajectoryT<P::kNX, P::kNU>& traj,
                             const ExecPolicy& exec = {}) {
  std::vector<double> margins;
  stage_margin_batch(prob, traj, exec, &margins);
  double m = std::numeric_limits<double>::infinity();
  for (double v : margins) m = std::min(m, v);
  return m;
}

// ----------------------------------------------------------------------
// Newton search direction. Minimizes the local quadratic model
//   sum_i w_i (g_i' dz_i + 1/2 dz_i' W_i dz_i) + terminal model
// over tangent perturbations of the grid dynamics (z_{i+1} = Ad z + Bd v,
// z_0 = 0) via a backward Riccati sweep with affine terms and a forward
// rollout. With the exact Hessian the per-interval model adds the field
// curvature contracted with the closed-loop adjoint.
template <class P>
DirectionT<P> search_direction(const P& prob, const TrajectoryT<P::kNX, P::kNU>& traj,
                               const GainScheduleT<P>& proj_gains,
                               const NewtonOptions& opts = {}) {
  constexpr int NX = P::kNX;
  constexpr int NU = P::kNU;
  constexpr int NZ = NX + NU;
  using XVec = Eigen::Matrix<double, NX, 1>;
  using UVec = Eigen::Matrix<double, NU, 1>;
  using AMat = Eigen::Matrix<double, NX, NX>;
  using BMat = Eigen::Matrix<double, NX, NU>;
  using ZV = Eigen::Matrix<double, NZ, 1>;
  using ZM = Eigen::Matrix<double, NZ, NZ>;
  using SMat = AMat;
  using UMat = Eigen::Matrix<double, NU, NU>;
  using XU = Eigen::Matrix<double, NX, NU>;
  using KMat = Eigen::Matrix<double, NU, NX>;

  const int n = traj.num_nodes();
  const double h = traj.ds;

  std::vector<AMat> Ad;
  std::vector<BMat> Bd;
  linearize_steps_batch(prob, traj, opts.exec, &Ad, &Bd);

  std::vector<double> cost;
  std::vector<ZV> grad;
  std::vector<ZM> hess_exact, hess_psd;
  stage_derivs_batch(prob, traj, opts.exec, &cost, &grad, &hess_exact, &hess_psd);

  XVec r_term;
  SMat p_term;
  prob.terminal_derivs(traj.x.back(), &r_term, &p_term);

  // Closed-loop adjoint and field curvature (exact Hessian only).
  std::vector<ZM> curv;
  if (opts.hessian == NewtonHessian::kExact) {
    std::vector<XVec> lambda(n);
    lambda[n - 1] = r_term + trapezoid_weight(n - 1, n, h) *
                                 (grad[n - 1].template head<NX>() -
                                  proj_gains.K[n - 1].transpose() * grad[n - 1].template tail<NU>());
    for (int i = n - 2; i >= 0; --i) {
      double w = trapezoid_weight(i, n, h);
      lambda[i] = w * (grad[i].template head<NX>() -
                       proj_gains.K[i].transpose() * grad[i].template tail<NU>()) +
                  (Ad[i] - Bd[i] * proj_gains.K[i]).transpose() * lambda[i + 1];
    }
    std::vector<XVec> lambda_next(n - 1);
    for (int i = 0; i + 1 < n; ++i) lambda_next[i] = lambda[i + 1];
    field_curvature_batch(prob, traj, lambda_next, opts.exec, &curv);
  }

  // Weighted per-node model Hessians, regularized to positive definite.
  std::vector<ZM> wt(n);
  std::vector<char> fellback(n, 0);
  {
    const auto& exec = opts.exec;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(exec.effective_threads()) \
    if (exec.mode == ExecMode::kParallel)
#endif
    for (int i = 0; i < n; ++i) {
      double w = trapezoid_weight(i, n, h);
      ZM m;
      if (opts.hessian == NewtonHessian::kExact) {
        m = w * hess_exact[i];
        if (i + 1 < n) m += curv[i];
      } else {
        m = w * hess_psd[i];
      }
      Eigen::LLT<ZM> llt(m);
      if (llt.info() != Eigen::Success) {
        m = w * hess_psd[i] + opts.reg_lambda * ZM::Identity();
        fellback[i] = 1;
        Eigen::LLT<ZM> llt2(m);
        if (llt2.info() != Eigen::Success) {
          m += opts.reg_lambda * ZM::Identity();
        }
      }
      wt[i] = m;
    }
  }

  DirectionT<P> dir;
  for (char f : fellback) dir.hessian_fallbacks += f;

  // Terminal node: fold the node-N stage model into the terminal model and
  // eliminate v_N pointwise.
  SMat p = p_term;
  XVec r = r_term;
  KMat k_gain_last;
  UVec k_ff_last;
  {
    const ZM& m = wt[n - 1];
    double w = trapezoid_weight(n - 1, n, h);
    SMat qn = m.template topLeftCorner<NX, NX>();
    XU sn = m.template topRightCorner<NX, NU>();
    UMat rn = m.template bottomRightCorner<NU, NU>();
    XVec an = w * grad[n - 1].template head<NX>();
    UVec bn = w * grad[n - 1].template tail<NU>();
    Eigen::LLT<UMat> llt(rn);
    if (llt.info() != Eigen::Success) {
      throw ConditioningError("terminal input block not positive definite");
    }
    k_gain_last = llt.solve(sn.transpose());
    k_ff_last = llt.solve(bn);
    p += qn - sn * k_gain_last;
    r += an - sn * k_ff_last;
    p = 0.5 * (p + p.transpose().eval());
  }

  std::vector<KMat> k_gain(n - 1);
  std::vector<UVec> k_ff(n - 1);
  for (int i = n - 2; i >= 0; --i) {
    double w = trapezoid_weight(i, n, h);
    const ZM& m = wt[i];
    SMat hxx = m.template topLeftCorner<NX, NX>() + Ad[i].transpose() * p * Ad[i];
    XU hxu = m.template topRightCorner<NX, NU>() + Ad[i].transpose() * p * Bd[i];
    UMat huu = m.template bottomRightCorner<NU, NU>() + Bd[i].transpose() * p * Bd[i];
    XVec hx = w * grad[i].template head<NX>() + Ad[i].transpose() * r;
    UVec hu = w * grad[i].template tail<NU>() + Bd[i].transpose() * r;
    Eigen::LLT<UMat> llt(huu);
    if (llt.info() != Eigen::Success) {
      huu += 1e3 * opts.reg_lambda * UMat::Identity();
      llt.compute(huu);
      if (llt.info() != Eigen::Success) {
        throw ConditioningError("input block not positive definite at s = " +
                                std::to_string(i * h));
      }
    }
    k_gain[i] = llt.solve(hxu.transpose());
    k_ff[i] = llt.solve(hu);
    p = hxx - hxu * k_gain[i];
    p = 0.5 * (p + p.transpose().eval());
    r = hx - hxu * k_ff[i];
  }

  // Forward rollout of the optimal tangent perturbation.
  dir.z.resize(n);
  dir.v.resize(n);
  dir.z[0].setZero();
  for (int i = 0; i + 1 < n; ++i) {
    dir.v[i] = -k_gain[i] * dir.z[i] - k_ff[i];
    dir.z[i + 1] = Ad[i] * dir.z[i] + Bd[i] * dir.v[i];
  }
  dir.v[n - 1] = -k_gain_last * dir.z[n - 1] - k_ff_last;

  double quad = dir.z[n - 1].dot(p_term * dir.z[n - 1]);
  for (int i = 0; i < n; ++i) {
    double w = trapezoid_weight(i, n, h);
    dir.dg_zeta += w * (grad[i].template head<NX>().dot(dir.z[i]) +
                        grad[i].template tail<NU>().dot(dir.v[i]));
    ZV dz;
    dz << dir.z[i], dir.v[i];
    quad += dz.dot(wt[i] * dz);
  }
  dir.dg_zeta += r_term.dot(dir.z[n - 1]);
  dir.quad_model = dir.dg_zeta + 0.5 * quad;
  return dir;
}

// ----------------------------------------------------------------------
// Armijo backtracking along zeta. A trial step is accepted only when the
// projection succeeds, the projected iterate is strictly feasible, and the
// sufficient-decrease test holds; projection failures just backtrack.
template <class P>
struct LineSearchResult {
  double gamma = 0.0;
  TrajectoryT<P::kNX, P::kNU> trajectory;
  double cost = 0.0;
};

template <class P>
LineSearchResult<P> line_search(const P& prob, const TrajectoryT<P::kNX, P::kNU>& traj,
                                const DirectionT<P>& dir, const GainScheduleT<P>& gains,
                                double current_cost, const NewtonOptions& opts = {}) {
  if (!(dir.dg_zeta < 0.0)) {
    throw InvalidArgumentError("line search requires a descent direction");
  }
  const int n = traj.num_nodes();
  double gamma = 1.0;
  while (gamma >= opts.gamma_min) {
    CurveT<P::kNX, P::kNU> curve;
    curve.ds = traj.ds;
    curve.x.resize(n);
    curve.u.resize(n);
    for (int i = 0; i < n; ++i) {
      curve.x[i] = traj.x[i] + gamma * dir.z[i];
      curve.u[i] = traj.u[i] + gamma * dir.v[i];
    }
    bool usable = true;
    TrajectoryT<P::kNX, P::kNU> trial;
    try {
      trial = project(prob, curve, gains, traj.x[0]);
    } catch (const ProjectionDivergedError&) {
      usable = false;
    }
    if (usable) {
      double stage_margin = min_stage_margin_over(prob, trial, opts.exec);
      double final_margin = prob.min_final_margin(trial.x.back());
      if (stage_margin > 0.0 && final_margin > 0.0) {
        double cost = total_cost(prob, trial, opts.exec);
        if (cost <= current_cost + opts.armijo_alpha * gamma * dir.dg_zeta) {
          return LineSearchResult<P>{gamma, std::move(trial), cost};
        }
      }
    }
    gamma *= opts.backtrack_factor;
  }
  throw LineSearchError("line search failed below gamma_min; |Dg.zeta| = " +
                            std::to_string(std::abs(dir.dg_zeta)),
                        dir.dg_zeta);
}

// ----------------------------------------------------------------------
// Newton iteration at fixed barrier parameters. Returns the final iterate
// with per-step records; line-search failure and the iteration cap return
// the best iterate so far instead of throwing.
template <class P>
struct FixedBarrierResult {
  TrajectoryT<P::kNX, P::kNU> trajectory;
  double cost = 0.0;
  FixedBarrierReport report;
};

template <class P>
FixedBarrierResult<P> solve_fixed_barrier(const P& prob,
                                          const TrajectoryT<P::kNX, P::kNU>& traj0,
                                          const NewtonOptions& opts = {}) {
  FixedBarrierResult<P> out;
  out.trajectory = traj0;
  out.cost = total_cost(prob, out.trajectory, opts.exec);

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    GainScheduleT<P> gains = design_gain(prob, out.trajectory, opts);
    DirectionT<P> dir = search_direction(prob, out.trajectory, gains, opts);

    if (std::abs(dir.dg_zeta) <= opts.tol * (1.0 + std::abs(out.cost))) {
      out.report.converged = true;
      out.report.stop_reason = "first-order stationarity";
      return out;
    }
    if (dir.dg_zeta >= 0.0) {
      out.report.stop_reason = "model produced a non-descent direction";
      return out;
    }

    LineSearchResult<P> ls;
    try {
      ls = line_search(prob, out.trajectory, dir, gains, out.cost, opts);
    } catch (const LineSearchError& e) {
      out.report.stop_reason = e.what();
      return out;
    }
    out.trajectory = std::move(ls.trajectory);
    out.cost = ls.cost;

    IterationRecord rec;
    rec.iteration = iter;
    rec.gamma = ls.gamma;
    rec.cost = ls.cost;
    rec.descent = dir.dg_zeta;
    rec.min_stage_margin = min_stage_margin_over(prob, out.trajectory, opts.exec);
    rec.min_final_margin = prob.min_final_margin(out.trajectory.x.back());
    rec.defect = trajectory_defect(prob, out.trajectory);
    rec.riccati_residual = gains.max_residual;
    rec.hessian_fallbacks = dir.hessian_fallbacks;
    out.report.iterations.push_back(rec);
  }
  out.report.stop_reason = "iteration cap reached";
  return out;
}

}  // namespace mintime

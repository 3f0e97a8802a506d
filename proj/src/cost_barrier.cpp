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

#include "mintime/cost_barrier.hpp"

#include <algorithm>
#include <cmath>

#include "mintime/dynamics.hpp"
#include "mintime/errors.hpp"

namespace mintime {

void BarrierParams::validate() const {
  if (!(eps > 0.0 && nu > 0.0 && eps_f > 0.0 && nu_f > 0.0)) {
    throw InvalidArgumentError("barrier parameters must be strictly positive");
  }
}

void Schedule::validate() const {
  if (!(factor > 0.0 && factor < 1.0)) {
    throw InvalidArgumentError("schedule factor must lie in (0, 1)");
  }
  if (!(eps_floor > 0.0 && nu_floor > 0.0)) {
    throw InvalidArgumentError("schedule floors must be positive");
  }
  if (max_outer < 1) throw InvalidArgumentError("schedule needs at least one outer iteration");
}

BarrierParams Schedule::at(int outer) const {
  double scale = std::pow(factor, outer);
  BarrierParams p;
  p.eps = std::max(scale, eps_floor);
  p.eps_f = std::max(scale, eps_floor);
  p.nu = std::max(scale, nu_floor);
  p.nu_f = std::max(scale, nu_floor);
  return p;
}

double beta(double x, double l) {
  if (x > l) return -std::log(x);
  double y = (x - 2.0 * l) / l;
  return -std::log(l) + 0.5 * (y * y - 1.0);
}

double beta_d1(double x, double l) {
  if (x > l) return -1.0 / x;
  return (x - 2.0 * l) / (l * l);
}

double beta_d2(double x, double l) {
  if (x > l) return 1.0 / (x * x);
  return 1.0 / (l * l);
}

double running_cost(const StateVec& x, const FrenetFrame& frame) {
  return dilation(x, frame, -1.0);
}

double augmented_stage_cost(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                            const InputStateBounds& bounds, const CorridorSpec& corridor,
                            int node, const BarrierParams& params) {
  double cost = running_cost(x, frame);
  double c[kMaxStageConstraints];
  int n = eval_stage_constraints(x, u, bounds, corridor, node, c);
  for (int j = 0; j < n; ++j) cost += params.eps * beta(-c[j], params.nu);
  return cost;
}

double terminal_cost(const StateVec& x_final, const FinalBox& box, const BarrierParams& params) {
  StateVec c = eval_final_constraints(x_final, box);
  double cost = 0.0;
  for (int i = 0; i < kStateDim; ++i) cost += params.eps_f * beta(-c[i], params.nu_f);
  return cost;
}

StageDerivs stage_derivatives(const StateVec& x, const InputVec& u, const FrenetFrame& frame,
                              const InputStateBounds& bounds, const CorridorSpec& corridor,
                              int node, const BarrierParams& params, HessianMode mode) {
  StageDerivs out;

  // Time density part.
  const Vec3 v = x.segment<3>(kV1);
  const double sigma = frame.t.dot(v);
  const double mu = 1.0 - frame.k * x[kW1];
  out.cost = dilation(x, frame, -1.0);

  out.grad[kW1] = -frame.k / sigma;
  out.grad.segment<3>(kV1) = -(mu / (sigma * sigma)) * frame.t;

  // Hessian of mu/sigma over (w1, v): indefinite cross term.
  Eigen::Matrix<double, 4, 4> h0 = Eigen::Matrix<double, 4, 4>::Zero();
  h0.block<1, 3>(0, 1) = (frame.k / (sigma * sigma)) * frame.t.transpose();
  h0.block<3, 1>(1, 0) = (frame.k / (sigma * sigma)) * frame.t;
  h0.block<3, 3>(1, 1) = (2.0 * mu / (sigma * sigma * sigma)) * frame.t * frame.t.transpose();
  if (mode == HessianMode::kGaussNewton) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 4, 4>> es(h0);
    Eigen::Matrix<double, 4, 1> ev = es.eigenvalues().cwiseMax(0.0);
    h0 = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  }
  out.hess(kW1, kW1) = h0(0, 0);
  out.hess.block<1, 3>(kW1, kV1) = h0.block<1, 3>(0, 1);
  out.hess.block<3, 1>(kV1, kW1) = h0.block<3, 1>(1, 0);
  out.hess.block<3, 3>(kV1, kV1) = h0.block<3, 3>(1, 1);

  // Barrier part: both curvature terms are PSD for this constraint family
  // (beta is convex decreasing and every c_j has a PSD Hessian).
  StageConstraintDeriv cons[kMaxStageConstraints];
  int n = eval_stage_constraint_derivs(x, u, bounds, corridor, node, cons);
  for (int j = 0; j < n; ++j) {
    const auto& c = cons[j];
    const double b1 = beta_d1(-c.value, params.nu);
    const double b2 = beta_d2(-c.value, params.nu);
    out.cost += params.eps * beta(-c.value, params.nu);
    for (int a = 0; a < c.nvars; ++a) {
      out.grad[c.var[a]] += -params.eps * b1 * c.grad[a];
      out.hess(c.var[a], c.var[a]) += params.eps * (-b1) * c.hess[a];
      for (int bidx = 0; bidx < c.nvars; ++bidx) {
        out.hess(c.var[a], c.var[bidx]) += params.eps * b2 * c.grad[a] * c.grad[bidx];
      }
    }
  }
  return out;
}

TerminalDerivs terminal_derivatives(const StateVec& x_final, const FinalBox& box,
                                    const BarrierParams& params) {
  TerminalDerivs out;
  StateVec value, grad, hess;
  eval_final_constraint_derivs(x_final, box, &value, &grad, &hess);
  for (int i = 0; i < kStateDim; ++i) {
    const double b1 = beta_d1(-value[i], params.nu_f);
    const double b2 = beta_d2(-value[i], params.nu_f);
    out.cost += params.eps_f * beta(-value[i], params.nu_f);
    out.grad[i] = -params.eps_f * b1 * grad[i];
    out.hess_diag[i] = params.eps_f * (b2 * grad[i] * grad[i] - b1 * hess[i]);
  }
  return out;
}

}  // namespace mintime

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

#include <vector>

#include "mintime/discretization.hpp"
#include "mintime/types.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace mintime {

// Per-node batch kernels over a trajectory. Every kernel writes one
// independent slot per node, so the parallel path is bit-identical to the
// serial reference; reductions over the per-node arrays stay serial.
enum class ExecMode { kSerial, kParallel };

struct ExecPolicy {
  ExecMode mode = ExecMode::kParallel;
  int threads = 0;  // 0: OpenMP default

  int effective_threads() const {
#if defined(_OPENMP)
    if (mode == ExecMode::kSerial) return 1;
    return threads > 0 ? threads : omp_get_max_threads();
#else
    return 1;
#endif
  }
};

// Discrete step Jacobians at every interval.
template <class Model>
void linearize_steps_batch(const Model& m, const TrajectoryT<Model::kNX, Model::kNU>& traj,
                           const ExecPolicy& policy,
                           std::vector<Eigen::Matrix<double, Model::kNX, Model::kNX>>* Ad,
                           std::vector<Eigen::Matrix<double, Model::kNX, Model::kNU>>* Bd) {
  const int n = traj.num_nodes() - 1;
  Ad->resize(n);
  Bd->resize(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(policy.effective_threads()) \
    if (policy.mode == ExecMode::kParallel)
#endif
  for (int i = 0; i < n; ++i) {
    rk4_step_jacobians(m, i, traj.x[i], traj.u[i], traj.ds, &(*Ad)[i], &(*Bd)[i]);
  }
}

// Continuous-field Jacobians at every node (gain design works on these).
template <class Model>
void linearize_field_batch(const Model& m, const TrajectoryT<Model::kNX, Model::kNU>& traj,
                           const ExecPolicy& policy,
                           std::vector<Eigen::Matrix<double, Model::kNX, Model::kNX>>* A,
                           std::vector<Eigen::Matrix<double, Model::kNX, Model::kNU>>* B) {
  const int n = traj.num_nodes();
  A->resize(n);
  B->resize(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(policy.effective_threads()) \
    if (policy.mode == ExecMode::kParallel)
#endif
  for (int i = 0; i < n; ++i) {
    m.jacobians(2 * i, traj.x[i], traj.u[i], &(*A)[i], &(*B)[i]);
  }
}

// Stage cost, gradient and both Hessian forms at every node.
template <class Model>
void stage_derivs_batch(
    const Model& m, const TrajectoryT<Model::kNX, Model::kNU>& traj, const ExecPolicy& policy,
    std::vector<double>* cost,
    std::vector<Eigen::Matrix<double, Model::kNX + Model::kNU, 1>>* grad,
    std::vector<Eigen::Matrix<double, Model::kNX + Model::kNU, Model::kNX + Model::kNU>>* hess_exact,
    std::vector<Eigen::Matrix<double, Model::kNX + Model::kNU, Model::kNX + Model::kNU>>* hess_psd) {
  const int n = traj.num_nodes();
  cost->resize(n);
  grad->resize(n);
  hess_exact->resize(n);
  hess_psd->resize(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(policy.effective_threads()) \
    if (policy.mode == ExecMode::kParallel)
#endif
  for (int i = 0; i < n; ++i) {
    m.stage_derivs(i, traj.x[i], traj.u[i], &(*cost)[i], &(*grad)[i], &(*hess_exact)[i],
                   &(*hess_psd)[i]);
  }
}

// Stage cost per node (line-search hot path); sum is taken serially by the
// caller with trapezoid weights.
template <class Model>
void stage_cost_batch(const Model& m, const TrajectoryT<Model::kNX, Model::kNU>& traj,
                      const ExecPolicy& policy, std::vector<double>* cost) {
  const int n = traj.num_nodes();
  cost->resize(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(policy.effective_threads()) \
    if (policy.mode == ExecMode::kParallel)
#endif
  for (int i = 0; i < n; ++i) {
    (*cost)[i] = m.stage_cost(i, traj.x[i], traj.u[i]);
  }
}

// Strict feasibility margin (min over constraints of -c) at every node.
template <class Model>
void stage_margin_batch(const Model& m, const TrajectoryT<Model::kNX, Model::kNU>& traj,
                        const ExecPolicy& policy, std::vector<double>* margin) {
  const int n = traj.num_nodes();
  margin->resize(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(policy.effective_threads()) \
    if (policy.mode == ExecMode::kParallel)
#endif
  for (int i = 0; i < n; ++i) {
    (*margin)[i] = m.min_stage_margin(i, traj.x[i], traj.u[i]);
  }
}

// Second-derivative curvature of the field contracted with the adjoint, per
// interval: h * sum_k lambda[k] * d2 f_k / dz dz, evaluated by central
// differences of the analytic Jacobians.
template <class Model>
void field_curvature_batch(
    const Model& m, const TrajectoryT<Model::kNX, Model::kNU>& traj,
    const std::vector<Eigen::Matrix<double, Model::kNX, 1>>& lambda_next,
    const ExecPolicy& policy,
    std::vector<Eigen::Matrix<double, Model::kNX + Model::kNU, Model::kNX + Model::kNU>>* curv) {
  constexpr int NX = Model::kNX;
  constexpr int NU = Model::kNU;
  constexpr int NZ = NX + NU;
  using AMat = Eigen::Matrix<double, NX, NX>;
  using BMat = Eigen::Matrix<double, NX, NU>;
  using ZM = Eigen::Matrix<double, NZ, NZ>;
  const int n = traj.num_nodes() - 1;
  curv->resize(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(policy.effective_threads()) \
    if (policy.mode == ExecMode::kParallel)
#endif
  for (int i = 0; i < n; ++i) {
    ZM c = ZM::Zero();
    const auto& lam = lambda_next[i];
    for (int mvar = 0; mvar < NZ; ++mvar) {
      auto xp = traj.x[i];
      auto up = traj.u[i];
      auto xm = traj.x[i];
      auto um = traj.u[i];
      double base = mvar < NX ? traj.x[i][mvar] : traj.u[i][mvar - NX];
      double delta = 1e-6 * (1.0 + std::abs(base));
      if (mvar < NX) {
        xp[mvar] += delta;
        xm[mvar] -= delta;
      } else {
        up[mvar - NX] += delta;
        um[mvar - NX] -= delta;
      }
      AMat ap, am;
      BMat bp, bm;
      m.jacobians(2 * i, xp, up, &ap, &bp);
      m.jacobians(2 * i, xm, um, &am, &bm);
      Eigen::Matrix<double, NX, NZ> dj;
      dj.template leftCols<NX>() = (ap - am) / (2.0 * delta);
      dj.template rightCols<NU>() = (bp - bm) / (2.0 * delta);
      c.row(mvar) = lam.transpose() * dj;
    }
    (*curv)[i] = 0.5 * traj.ds * (c + c.transpose());
  }
}

}  // namespace mintime

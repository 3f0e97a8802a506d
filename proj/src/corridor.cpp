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

#include "mintime/corridor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mintime/errors.hpp"

namespace mintime {
namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// c = y^2 - 1 with y = (2q - (hi+lo))/(hi-lo).
struct BoxTerm {
  double value;
  double dq;   // dc/dq
  double d2q;  // d2c/dq2
};

BoxTerm box_term(double q, double lo, double hi) {
  const double range = hi - lo;
  const double y = (2.0 * q - (hi + lo)) / range;
  return {y * y - 1.0, 4.0 * y / range, 8.0 / (range * range)};
}

// c = (q/qmax)^2 - 1.
BoxTerm symmetric_term(double q, double qmax) {
  const double y = q / qmax;
  return {y * y - 1.0, 2.0 * y / (qmax * qmax) * qmax, 2.0 / (qmax * qmax)};
}

}  // namespace

double BoundProfile::at_s(double s) const {
  const int n = num_nodes();
  double x = s / ds;
  int i = std::clamp(static_cast<int>(std::floor(x)), 0, n - 2);
  double u = x - i;
  return (1.0 - u) * values[i] + u * values[i + 1];
}

BoundProfile BoundProfile::constant(int num_nodes, double ds, double value) {
  BoundProfile p;
  p.ds = ds;
  p.values.assign(static_cast<size_t>(num_nodes), value);
  return p;
}

BoundProfile BoundProfile::negated(const BoundProfile& other) {
  BoundProfile p = other;
  for (auto& v : p.values) v = -v;
  return p;
}

BoundProfile sigmoid_bound(int num_nodes, double ds, double s_mid, double width,
                           double hi, double lo) {
  if (width <= 0.0) throw InvalidArgumentError("sigmoid_bound: width must be positive");
  BoundProfile p;
  p.ds = ds;
  p.values.resize(static_cast<size_t>(num_nodes));
  for (int i = 0; i < num_nodes; ++i) {
    double s = i * ds;
    p.values[static_cast<size_t>(i)] = hi + (lo - hi) * logistic((s - s_mid) / width);
  }
  return p;
}

BoundProfile sigmoid_valley_bound(int num_nodes, double ds, double c1, double c2,
                                  double width, double hi, double lo) {
  if (width <= 0.0) throw InvalidArgumentError("sigmoid_valley_bound: width must be positive");
  if (c2 <= c1) throw InvalidArgumentError("sigmoid_valley_bound: c2 must exceed c1");
  BoundProfile p;
  p.ds = ds;
  p.values.resize(static_cast<size_t>(num_nodes));
  for (int i = 0; i < num_nodes; ++i) {
    double s = i * ds;
    double dip = logistic((s - c1) / width) - logistic((s - c2) / width);
    p.values[static_cast<size_t>(i)] = hi + (lo - hi) * dip;
  }
  return p;
}

double CorridorSpec::max_bound_magnitude() const {
  double m = 0.0;
  if (section == Section::kCircular) {
    for (double v : r_obs.values) m = std::max(m, std::abs(v));
  } else {
    for (const auto* p : {&w1_min, &w1_max, &w2_min, &w2_max}) {
      for (double v : p->values) m = std::max(m, std::abs(v));
    }
  }
  return m;
}

void CorridorSpec::validate(double max_curvature) const {
  if (section == Section::kCircular) {
    if (r_obs.values.empty()) throw InvalidArgumentError("circular corridor: empty r_obs");
    for (size_t i = 0; i < r_obs.values.size(); ++i) {
      if (!(r_obs.values[i] > 0.0)) {
        throw InvalidArgumentError("circular corridor: r_obs <= 0 at node " + std::to_string(i));
      }
    }
  } else {
    const size_t n = w1_min.values.size();
    if (n == 0 || w1_max.values.size() != n || w2_min.values.size() != n ||
        w2_max.values.size() != n) {
      throw InvalidArgumentError("rectangular corridor: inconsistent profile sizes");
    }
    for (size_t i = 0; i < n; ++i) {
      if (w1_max.values[i] - w1_min.values[i] < min_clearance ||
          w2_max.values[i] - w2_min.values[i] < min_clearance) {
        throw InvalidArgumentError("rectangular corridor: gap below clearance at node " +
                                   std::to_string(i));
      }
    }
  }
  if (max_curvature > 1e-12) {
    double cap = 0.95 / max_curvature;
    if (max_bound_magnitude() > cap) {
      throw InvalidArgumentError(
          "corridor bound " + std::to_string(max_bound_magnitude()) +
          " exceeds projection-uniqueness cap 0.95/max-curvature = " + std::to_string(cap));
    }
  }
}

void InputStateBounds::validate() const {
  if (!(roll_rate_max > 0.0 && pitch_rate_max > 0.0 && yaw_rate_max > 0.0)) {
    throw InvalidArgumentError("rate bounds must be positive");
  }
  if (!(thrust_min > 0.0)) throw InvalidArgumentError("thrust_min must be positive");
  if (!(thrust_min < thrust_max)) throw InvalidArgumentError("thrust_min must be below thrust_max");
  for (const auto* p : {&roll_max, &pitch_max, &yaw_max}) {
    if (p->values.empty()) throw InvalidArgumentError("angle bound profile missing");
    for (double v : p->values) {
      if (!(v > 0.0)) throw InvalidArgumentError("angle bounds must be positive");
    }
  }
}

void FinalBox::validate() const {
  for (int i = 0; i < kStateDim; ++i) {
    if (!(lo[i] < hi[i])) {
      throw InvalidArgumentError("final box: min >= max for state component " +
                                 std::to_string(i));
    }
  }
}

FinalBox FinalBox::centered(const StateVec& center, const StateVec& tol) {
  FinalBox box;
  box.lo = center - tol;
  box.hi = center + tol;
  box.validate();
  return box;
}

double eval_circular(double w1, double w2, double r_obs) {
  return (w1 * w1 + w2 * w2) / (r_obs * r_obs) - 1.0;
}

double eval_rect(double w, double w_min, double w_max) {
  double y = (2.0 * w - (w_max + w_min)) / (w_max - w_min);
  return y * y - 1.0;
}

int stage_constraint_count(const CorridorSpec& corridor) {
  return 7 + corridor.num_stage_constraints();
}

std::vector<std::string> stage_constraint_names(const CorridorSpec& corridor) {
  std::vector<std::string> names = {"roll_rate", "pitch_rate", "yaw_rate", "roll",
                                    "pitch",     "yaw",        "thrust"};
  if (corridor.section == CorridorSpec::Section::kCircular) {
    names.push_back("corridor_radius");
  } else {
    names.push_back("corridor_w1");
    names.push_back("corridor_w2");
  }
  return names;
}

int eval_stage_constraints(const StateVec& x, const InputVec& u,
                           const InputStateBounds& bounds, const CorridorSpec& corridor,
                           int node, double* out) {
  StageConstraintDeriv tmp[kMaxStageConstraints];
  int n = eval_stage_constraint_derivs(x, u, bounds, corridor, node, tmp);
  for (int j = 0; j < n; ++j) out[j] = tmp[j].value;
  return n;
}

int eval_stage_constraint_derivs(const StateVec& x, const InputVec& u,
                                 const InputStateBounds& bounds,
                                 const CorridorSpec& corridor, int node,
                                 StageConstraintDeriv* out) {
  auto set1 = [](StageConstraintDeriv* c, const BoxTerm& t, int var) {
    c->value = t.value;
    c->nvars = 1;
    c->var[0] = var;
    c->grad[0] = t.dq;
    c->hess[0] = t.d2q;
  };

  int j = 0;
  set1(&out[j++], symmetric_term(u[kRollRate], bounds.roll_rate_max), kStateDim + kRollRate);
  set1(&out[j++], symmetric_term(u[kPitchRate], bounds.pitch_rate_max), kStateDim + kPitchRate);
  set1(&out[j++], symmetric_term(u[kYawRate], bounds.yaw_rate_max), kStateDim + kYawRate);
  set1(&out[j++], symmetric_term(x[kRoll], bounds.roll_max.at(node)), kRoll);
  set1(&out[j++], symmetric_term(x[kPitch], bounds.pitch_max.at(node)), kPitch);
  set1(&out[j++], symmetric_term(x[kYaw], bounds.yaw_max.at(node)), kYaw);
  set1(&out[j++], box_term(u[kThrust], bounds.thrust_min, bounds.thrust_max),
       kStateDim + kThrust);

  if (corridor.section == CorridorSpec::Section::kCircular) {
    const double r = corridor.r_obs.at(node);
    StageConstraintDeriv* c = &out[j++];
    c->value = eval_circular(x[kW1], x[kW2], r);
    c->nvars = 2;
    c->var = {kW1, kW2};
    c->grad = {2.0 * x[kW1] / (r * r), 2.0 * x[kW2] / (r * r)};
    c->hess = {2.0 / (r * r), 2.0 / (r * r)};
  } else {
    set1(&out[j++], box_term(x[kW1], corridor.w1_min.at(node), corridor.w1_max.at(node)), kW1);
    set1(&out[j++], box_term(x[kW2], corridor.w2_min.at(node), corridor.w2_max.at(node)), kW2);
  }
  return j;
}

StateVec eval_final_constraints(const StateVec& x_final, const FinalBox& box) {
  StateVec c;
  for (int i = 0; i < kStateDim; ++i) {
    c[i] = box_term(x_final[i], box.lo[i], box.hi[i]).value;
  }
  return c;
}

void eval_final_constraint_derivs(const StateVec& x_final, const FinalBox& box,
                                  StateVec* value, StateVec* grad, StateVec* hess) {
  for (int i = 0; i < kStateDim; ++i) {
    BoxTerm t = box_term(x_final[i], box.lo[i], box.hi[i]);
    (*value)[i] = t.value;
    (*grad)[i] = t.dq;
    (*hess)[i] = t.d2q;
  }
}

ObstaclePointMap map_obstacle_point(const FramePath& path, const Vec3& p_obs) {
  ObstaclePointMap m;
  m.s = path.project_point(p_obs);
  auto [w1, w2] = path.transverse_coords(m.s, p_obs);
  m.w1 = w1;
  m.w2 = w2;
  return m;
}

CorridorSpec restrict_bounds(const CorridorSpec& corridor,
                             const std::vector<Vec3>& obstacle_points,
                             const FramePath& path, BoundSide side, double margin,
                             int window) {
  if (corridor.section != CorridorSpec::Section::kRectangular) {
    throw InvalidArgumentError("restrict_bounds requires a rectangular corridor");
  }
  const bool min_side = (side == BoundSide::kW1Min || side == BoundSide::kW2Min);
  const bool axis_w1 = (side == BoundSide::kW1Min || side == BoundSide::kW1Max);
  const double neutral =
      min_side ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();

  const int n = corridor.w1_min.num_nodes();
  const double ds = corridor.w1_min.ds;
  std::vector<double> layer(static_cast<size_t>(n), neutral);

  for (const Vec3& p : obstacle_points) {
    ObstaclePointMap m;
    try {
      m = map_obstacle_point(path, p);
    } catch (const OutOfTubeError&) {
      continue;  // farther than the capture radius: cannot shape any bound
    }
    // End-clamped projections are not orthogonal; the point lies beyond the
    // modeled arc interval.
    if (m.s <= 1e-12 || m.s >= path.length() - 1e-12) continue;
    double w = axis_w1 ? m.w1 : m.w2;
    w += min_side ? margin : -margin;
    int node = std::clamp(static_cast<int>(std::llround(m.s / ds)), 0, n - 1);
    auto& cell = layer[static_cast<size_t>(node)];
    cell = min_side ? std::max(cell, w) : std::min(cell, w);
  }

  // Widen the update layer: safe-side erosion of the free space, and the
  // reason a second application of the same cloud changes nothing.
  std::vector<double> spread(static_cast<size_t>(n), neutral);
  for (int i = 0; i < n; ++i) {
    for (int o = -window; o <= window; ++o) {
      int j = i + o;
      if (j < 0 || j >= n) continue;
      spread[static_cast<size_t>(i)] =
          min_side ? std::max(spread[static_cast<size_t>(i)], layer[static_cast<size_t>(j)])
                   : std::min(spread[static_cast<size_t>(i)], layer[static_cast<size_t>(j)]);
    }
  }

  CorridorSpec out = corridor;
  BoundProfile* target = nullptr;
  switch (side) {
    case BoundSide::kW1Min: target = &out.w1_min; break;
    case BoundSide::kW1Max: target = &out.w1_max; break;
    case BoundSide::kW2Min: target = &out.w2_min; break;
    case BoundSide::kW2Max: target = &out.w2_max; break;
  }
  for (int i = 0; i < n; ++i) {
    double& v = target->values[static_cast<size_t>(i)];
    v = min_side ? std::max(v, spread[static_cast<size_t>(i)])
                 : std::min(v, spread[static_cast<size_t>(i)]);
  }

  // Corridor must remain open.
  const BoundProfile& lo1 = out.w1_min;
  const BoundProfile& hi1 = out.w1_max;
  const BoundProfile& lo2 = out.w2_min;
  const BoundProfile& hi2 = out.w2_max;
  int first_bad = -1, last_bad = -1;
  for (int i = 0; i < n; ++i) {
    if (hi1.at(i) - lo1.at(i) < out.min_clearance || hi2.at(i) - lo2.at(i) < out.min_clearance) {
      if (first_bad < 0) first_bad = i;
      last_bad = i;
    }
  }
  if (first_bad >= 0) {
    throw InfeasibleCorridorError(
        "obstacle tightening closes the corridor over s = [" +
            std::to_string(first_bad * ds) + ", " + std::to_string(last_bad * ds) + "]",
        first_bad * ds, last_bad * ds);
  }
  return out;
}

}  // namespace mintime

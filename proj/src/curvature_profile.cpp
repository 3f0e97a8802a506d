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

#include "mintime/curvature_profile.hpp"

#include <algorithm>
#include <cmath>

#include "mintime/csv_io.hpp"
#include "mintime/errors.hpp"

namespace mintime {
namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

CurvatureProfile CurvatureProfile::zero() { return CurvatureProfile(); }

CurvatureProfile CurvatureProfile::constant(double value) {
  if (!std::isfinite(value)) throw InvalidArgumentError("constant profile: non-finite value");
  CurvatureProfile p;
  p.kind_ = Kind::kConstant;
  p.value_ = value;
  return p;
}

CurvatureProfile CurvatureProfile::tanh_difference(double amplitude, double sharpness,
                                                   double c1, double c2) {
  if (c2 <= c1) throw InvalidArgumentError("tanh_difference: c2 must exceed c1");
  CurvatureProfile p;
  p.kind_ = Kind::kTanhDifference;
  p.amplitude_ = amplitude;
  p.sharpness_ = sharpness;
  p.c1_ = c1;
  p.c2_ = c2;
  // The symmetric difference peaks at the midpoint.
  double mid = 0.5 * (c1 + c2);
  p.norm_ = std::tanh(sharpness * (mid - c1)) - std::tanh(sharpness * (mid - c2));
  return p;
}

CurvatureProfile CurvatureProfile::sigmoid_difference(double amplitude, double sharpness,
                                                      double c1, double c2) {
  if (c2 <= c1) throw InvalidArgumentError("sigmoid_difference: c2 must exceed c1");
  CurvatureProfile p;
  p.kind_ = Kind::kSigmoidDifference;
  p.amplitude_ = amplitude;
  p.sharpness_ = sharpness;
  p.c1_ = c1;
  p.c2_ = c2;
  double mid = 0.5 * (c1 + c2);
  p.norm_ = logistic(sharpness * (mid - c1)) - logistic(sharpness * (mid - c2));
  return p;
}

CurvatureProfile CurvatureProfile::from_samples(double h, std::vector<double> values,
                                                double lipschitz) {
  if (h <= 0.0) throw InvalidArgumentError("sampled profile: spacing must be positive");
  if (values.size() < 2) throw InvalidArgumentError("sampled profile: need at least 2 samples");
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidArgumentError("sampled profile: non-finite value at index " +
                                 std::to_string(i));
    }
    if (i > 0 && std::abs(values[i] - values[i - 1]) > lipschitz * h) {
      throw InvalidArgumentError("sampled profile: jump at index " + std::to_string(i) +
                                 " exceeds Lipschitz bound");
    }
  }
  CurvatureProfile p;
  p.kind_ = Kind::kSampled;
  p.h_ = h;
  p.samples_ = std::move(values);
  p.domain_length_ = h * static_cast<double>(p.samples_.size() - 1);
  return p;
}

CurvatureProfile CurvatureProfile::from_csv(const std::string& path, double lipschitz) {
  CsvTable t = read_csv(path);
  if (t.rows.empty() || t.cols() < 2) {
    throw InvalidArgumentError("profile CSV needs columns s,k: " + path);
  }
  int cs = t.column("s");
  int ck = t.column("k");
  if (cs < 0) cs = 0;
  if (ck < 0) ck = 1;
  std::vector<double> values(t.rows.size());
  double h = 0.0;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    values[i] = t.rows[i][ck];
    if (i == 1) h = t.rows[1][cs] - t.rows[0][cs];
    if (i >= 1) {
      double step = t.rows[i][cs] - t.rows[i - 1][cs];
      if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h))) {
        throw InvalidArgumentError("profile CSV grid not uniform: " + path);
      }
    }
  }
  if (!t.rows.empty() && std::abs(t.rows[0][cs]) > 1e-12) {
    throw InvalidArgumentError("profile CSV must start at s = 0: " + path);
  }
  return from_samples(h, std::move(values), lipschitz);
}

double CurvatureProfile::operator()(double s) const {
  switch (kind_) {
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return value_;
    case Kind::kTanhDifference:
      return amplitude_ *
             (std::tanh(sharpness_ * (s - c1_)) - std::tanh(sharpness_ * (s - c2_))) / norm_;
    case Kind::kSigmoidDifference:
      return amplitude_ *
             (logistic(sharpness_ * (s - c1_)) - logistic(sharpness_ * (s - c2_))) / norm_;
    case Kind::kSampled: {
      const int m = static_cast<int>(samples_.size());
      double x = s / h_;
      int i = std::clamp(static_cast<int>(std::floor(x)), 0, m - 2);
      double u = x - i;
      // Catmull-Rom with clamped end stencils.
      double p0 = samples_[std::max(i - 1, 0)];
      double p1 = samples_[i];
      double p2 = samples_[i + 1];
      double p3 = samples_[std::min(i + 2, m - 1)];
      double a0 = p1;
      double a1 = 0.5 * (p2 - p0);
      double a2 = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
      double a3 = 0.5 * (p3 - p0) + 1.5 * (p1 - p2);
      return a0 + u * (a1 + u * (a2 + u * a3));
    }
  }
  return 0.0;
}

double CurvatureProfile::max_abs(double length, double resolution) const {
  if (kind_ == Kind::kZero) return 0.0;
  if (kind_ == Kind::kConstant) return std::abs(value_);
  double m = 0.0;
  int n = std::max(2, static_cast<int>(std::ceil(length / resolution)));
  for (int i = 0; i <= n; ++i) {
    double s = length * static_cast<double>(i) / n;
    m = std::max(m, std::abs((*this)(s)));
  }
  return m;
}

}  // namespace mintime

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

#include <limits>
#include <string>
#include <vector>

namespace mintime {

/// Scalar arc-length profile k(s): named closed forms or uniformly sampled
/// data (cubic interpolation). Used for curvature and torsion.
class CurvatureProfile {
 public:
  enum class Kind { kZero, kConstant, kTanhDifference, kSigmoidDifference, kSampled };

  CurvatureProfile() = default;

  static CurvatureProfile zero();
  static CurvatureProfile constant(double value);
  // amplitude * (tanh(a(s-c1)) - tanh(a(s-c2))) normalized so the peak
  // (at the midpoint of the symmetric difference) equals amplitude.
  static CurvatureProfile tanh_difference(double amplitude, double sharpness,
                                          double c1, double c2);
  // Same shape built from logistic sigmoids.
  static CurvatureProfile sigmoid_difference(double amplitude, double sharpness,
                                             double c1, double c2);
  // Uniform samples at spacing h starting at s = 0. lipschitz bounds the
  // adjacent-sample jump: |k[i+1]-k[i]| <= lipschitz * h.
  static CurvatureProfile from_samples(double h, std::vector<double> values,
                                       double lipschitz = 1e3);
  static CurvatureProfile from_csv(const std::string& path, double lipschitz = 1e3);

  double operator()(double s) const;

  Kind kind() const { return kind_; }
  // Domain length; closed forms are unbounded.
  double domain_length() const { return domain_length_; }
  // Max |k| over [0, length] scanned at the given resolution.
  double max_abs(double length, double resolution) const;

 private:
  Kind kind_ = Kind::kZero;
  double value_ = 0.0;      // constant
  double amplitude_ = 0.0;  // difference forms
  double sharpness_ = 1.0;
  double c1_ = 0.0;
  double c2_ = 0.0;
  double norm_ = 1.0;
  double h_ = 0.0;  // sampled spacing
  std::vector<double> samples_;
  double domain_length_ = std::numeric_limits<double>::infinity();
};

using TorsionProfile = CurvatureProfile;

}  // namespace mintime

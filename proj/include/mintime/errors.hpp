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

#include <stdexcept>
#include <string>

namespace mintime {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments or violated preconditions.
struct InvalidArgumentError : Error {
  using Error::Error;
};

// Geometry: point projection has no unique minimizer.
struct AmbiguousProjectionError : Error {
  using Error::Error;
};

// Geometry: point farther from the path than the capture radius.
struct OutOfTubeError : Error {
  using Error::Error;
};

// Pitch at or beyond the Euler-rate singularity margin.
struct PitchSingularityError : Error {
  using Error::Error;
};

// Tangential velocity or tube factor (1 - k*w1) lost positivity.
struct StateDomainError : Error {
  struct Info {
    double s = 0.0;
  };
  StateDomainError(const std::string& msg, double s_fail)
      : Error(msg), s(s_fail) {}
  double s = 0.0;
};

// Obstacle tightening closed the corridor.
struct InfeasibleCorridorError : Error {
  InfeasibleCorridorError(const std::string& msg, double s_lo_, double s_hi_)
      : Error(msg), s_lo(s_lo_), s_hi(s_hi_) {}
  double s_lo = 0.0;
  double s_hi = 0.0;
};

// Closed-loop integration left the admissible state domain.
struct ProjectionDivergedError : Error {
  ProjectionDivergedError(const std::string& msg, double s_fail)
      : Error(msg), s(s_fail) {}
  double s = 0.0;
};

// Riccati sweep blew up or returned unusable gains.
struct GainDesignError : Error {
  using Error::Error;
};

// LQ subproblem not positive definite even after regularization.
struct ConditioningError : Error {
  using Error::Error;
};

// Backtracking reached the minimum step size.
struct LineSearchError : Error {
  LineSearchError(const std::string& msg, double descent_)
      : Error(msg), descent(descent_) {}
  double descent = 0.0;
};

// Initial trajectory violates a constraint.
struct InfeasibleInitializationError : Error {
  using Error::Error;
};

// Scenario config parse/validation failure; message names the field path.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace mintime

// Copyright 2026 The Furuta Dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "furuta/errors.hpp"

namespace furuta {

/// Piecewise-constant motor torque. Every profile is right-continuous: the
/// value at a breakpoint is the value of the segment that starts there.
///
///  - zero:      tau(t) = 0
///  - step:      tau(t) = amplitude on [t_on, t_off), 0 elsewhere
///  - piecewise: tau(t) = levels[k] on [breakpoints[k-1], breakpoints[k]),
///               with levels.size() == breakpoints.size() + 1
struct TorqueProfile {
  enum class Kind { zero, step, piecewise };

  Kind kind = Kind::zero;
  double amplitude = 0.0;
  double t_on = 0.0;
  double t_off = 0.0;
  std::vector<double> breakpoints;
  std::vector<double> levels;

  static TorqueProfile zero() { return {}; }

  static TorqueProfile step(double amplitude, double t_on, double t_off) {
    if (!std::isfinite(amplitude) || !std::isfinite(t_on) || !std::isfinite(t_off) ||
        !(t_on < t_off)) {
      throw DomainError("step torque requires finite amplitude and t_on < t_off");
    }
    TorqueProfile p;
    p.kind = Kind::step;
    p.amplitude = amplitude;
    p.t_on = t_on;
    p.t_off = t_off;
    if (t_on > 0.0) p.breakpoints.push_back(t_on);
    p.breakpoints.push_back(t_off);
    return p;
  }

  static TorqueProfile piecewise(std::vector<double> breakpoints, std::vector<double> levels) {
    if (levels.size() != breakpoints.size() + 1) {
      throw DomainError("piecewise torque needs one more level than breakpoints");
    }
    for (double b : breakpoints) {
      if (!std::isfinite(b)) throw DomainError("piecewise torque breakpoints must be finite");
    }
    for (double l : levels) {
      if (!std::isfinite(l)) throw DomainError("piecewise torque levels must be finite");
    }
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()) ||
        std::adjacent_find(breakpoints.begin(), breakpoints.end()) != breakpoints.end()) {
      throw DomainError("piecewise torque breakpoints must be strictly increasing");
    }
    TorqueProfile p;
    p.kind = Kind::piecewise;
    p.breakpoints = std::move(breakpoints);
    p.levels = std::move(levels);
    return p;
  }

  double operator()(double t) const {
    switch (kind) {
      case Kind::zero:
        return 0.0;
      case Kind::step:
        return (t >= t_on && t < t_off) ? amplitude : 0.0;
      case Kind::piecewise: {
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
        return levels[static_cast<std::size_t>(it - breakpoints.begin())];
      }
    }
    return 0.0;
  }

  /// Torque held over a step [t, t + h] that does not straddle a breakpoint.
  /// Sampling the midpoint gives the left limit at a breakpoint that ends the
  /// step, which is what the stepper needs.
  double over_step(double t, double h) const { return (*this)(t + 0.5 * h); }

  /// Breakpoints strictly inside (t0, t1).
  std::vector<double> breakpoints_within(double t0, double t1) const {
    std::vector<double> out;
    for (double b : breakpoints) {
      if (b > t0 && b < t1) out.push_back(b);
    }
    return out;
  }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::zero: return "zero";
      case Kind::step: return "step";
      case Kind::piecewise: return "piecewise";
    }
    return "zero";
  }
};

/// Step of `amplitude` switched on at t = 0 and off at t = duration.
inline TorqueProfile step_torque_profile(double amplitude, double duration) {
  if (!(duration > 0.0)) throw DomainError("step_torque_profile: duration must be positive");
  return TorqueProfile::step(amplitude, 0.0, duration);
}

}  // namespace furuta

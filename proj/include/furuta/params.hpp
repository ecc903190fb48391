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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "furuta/errors.hpp"

namespace furuta {

/// Moment of inertia of a uniform bar of mass `m0` and length `L0` about one
/// end (the motor shaft).
inline double inertia_arm(double m0, double L0) {
  if (!(m0 > 0.0) || !(L0 > 0.0)) {
    throw DomainError("inertia_arm: mass and length must be positive");
  }
  return m0 * L0 * L0 / 3.0;
}

/// Moment of inertia of a uniform bar of mass `m1` and length `L1` about its
/// centre of mass.
inline double inertia_pendulum(double m1, double L1) {
  if (!(m1 > 0.0) || !(L1 > 0.0)) {
    throw DomainError("inertia_pendulum: mass and length must be positive");
  }
  return m1 * L1 * L1 / 12.0;
}

/// Physical constants of the arm + pendulum linkage. SI units throughout.
///
/// `m0` is only needed to derive `I0`; when `I0` is given directly it is kept
/// for documentation as the implied mass 3*I0/L0^2.
struct PendulumParams {
  double g = 9.81;
  double L0 = 0.201;
  double L1 = 0.30997;
  double l1 = 0.154985;
  double m0 = 3.0 * 0.0052 / (0.201 * 0.201);
  double m1 = 0.2866;
  double I0 = 0.0052;
  double I1 = 0.0023;

  /// Reference prototype values (measured inertias, not the bar model).
  static PendulumParams reference() { return PendulumParams{}; }

  /// Builds a parameter set from bar geometry: both links are uniform bars
  /// and the pendulum's centre of mass sits at mid-length.
  static PendulumParams from_geometry(double m0, double m1, double L0,
                                      double L1, double g = 9.81) {
    PendulumParams p;
    p.g = g;
    p.L0 = L0;
    p.L1 = L1;
    p.l1 = L1 / 2.0;
    p.m0 = m0;
    p.m1 = m1;
    p.I0 = inertia_arm(m0, L0);
    p.I1 = inertia_pendulum(m1, L1);
    p.validate();
    return p;
  }

  /// Arm mass consistent with `I0` under the uniform bar model.
  double implied_arm_mass() const { return 3.0 * I0 / (L0 * L0); }

  /// Field-level violations; empty when the parameters are physical.
  std::vector<FieldError> violations() const {
    std::vector<FieldError> out;
    auto positive = [&out](const char* name, double v) {
      if (!std::isfinite(v) || !(v > 0.0)) {
        out.push_back({name, "must be finite and strictly positive"});
      }
    };
    positive("g", g);
    positive("L0", L0);
    positive("L1", L1);
    positive("l1", l1);
    positive("m0", m0);
    positive("m1", m1);
    positive("I0", I0);
    positive("I1", I1);
    if (l1 > L1) out.push_back({"l1", "centre of mass must lie on the link (l1 <= L1)"});
    return out;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
  }

  bool operator==(const PendulumParams&) const = default;
};

}  // namespace furuta
